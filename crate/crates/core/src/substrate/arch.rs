//! Architecture descriptor and layer addressing.

use super::tokenizer::MIN_VOCAB;
use super::SubstrateError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Editing layers used for full-size checkpoints (shallow stack).
pub const DEFAULT_EDIT_LAYERS: [usize; 5] = [4, 5, 6, 7, 8];

/// Static shape of a decoder-only model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchDescriptor {
    /// Number of transformer layers.
    pub layers: usize,
    /// Residual-stream width d.
    pub hidden: usize,
    /// MLP inner width m (key dimension).
    pub inner: usize,
    /// Vocabulary size.
    pub vocab: usize,
    /// Attention heads; must divide `hidden`.
    pub heads: usize,
    /// Context window in tokens.
    pub max_seq: usize,
}

impl ArchDescriptor {
    /// Desk-scale fixture shape: d=64, m=256, V=512.
    pub fn fixture(layers: usize) -> Self {
        ArchDescriptor {
            layers,
            hidden: 64,
            inner: 256,
            vocab: 512,
            heads: 4,
            max_seq: 512,
        }
    }

    pub fn validate(&self) -> Result<(), SubstrateError> {
        if self.layers == 0
            || self.hidden == 0
            || self.inner == 0
            || self.heads == 0
            || self.hidden % self.heads != 0
            || self.max_seq == 0
        {
            return Err(SubstrateError::Format(format!(
                "inconsistent architecture descriptor: {self:?}"
            )));
        }
        if self.vocab < MIN_VOCAB {
            return Err(SubstrateError::Format(format!(
                "vocab {} smaller than the byte alphabet ({MIN_VOCAB})",
                self.vocab
            )));
        }
        Ok(())
    }

    pub fn head_dim(&self) -> usize {
        self.hidden / self.heads
    }

    /// Stable digest used to bind snapshots and checkpoints to a shape.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(
            format!(
                "L{} d{} m{} V{} h{} s{}",
                self.layers, self.hidden, self.inner, self.vocab, self.heads, self.max_seq
            )
            .as_bytes(),
        );
        hex(&h.finalize())
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// The editable site within a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EditSite {
    /// MLP down-projection, shape `hidden x inner`.
    MlpDown,
}

/// Ordered list of layers designated for editing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct LayerSpec(Vec<usize>);

impl LayerSpec {
    pub fn new(layers: Vec<usize>) -> Result<Self, SubstrateError> {
        if layers.is_empty() || layers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SubstrateError::BadLayerSpec(layers));
        }
        Ok(LayerSpec(layers))
    }

    pub fn single(layer: usize) -> Self {
        LayerSpec(vec![layer])
    }

    pub fn layers(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Midpoint layer, used as the default adaptor site.
    pub fn midpoint(&self) -> usize {
        self.0[self.0.len() / 2]
    }

    pub fn validate_for(&self, arch: &ArchDescriptor) -> Result<(), SubstrateError> {
        for &l in &self.0 {
            if l >= arch.layers {
                return Err(SubstrateError::InvalidLayer {
                    layer: l,
                    layers: arch.layers,
                });
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for LayerSpec {
    type Error = SubstrateError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        LayerSpec::new(v)
    }
}

impl From<LayerSpec> for Vec<usize> {
    fn from(s: LayerSpec) -> Vec<usize> {
        s.0
    }
}

impl std::fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_spec_must_increase() {
        assert!(LayerSpec::new(vec![]).is_err());
        assert!(LayerSpec::new(vec![1, 1]).is_err());
        assert!(LayerSpec::new(vec![2, 1]).is_err());
        assert!(LayerSpec::new(vec![0, 1, 3]).is_ok());
    }

    #[test]
    fn layer_spec_bound_by_model() {
        let arch = ArchDescriptor::fixture(4);
        assert!(LayerSpec::new(vec![1, 2]).unwrap().validate_for(&arch).is_ok());
        assert!(LayerSpec::new(vec![3, 4]).unwrap().validate_for(&arch).is_err());
        let deep = LayerSpec::new(DEFAULT_EDIT_LAYERS.to_vec()).unwrap();
        assert!(deep.validate_for(&arch).is_err());
    }

    #[test]
    fn default_editing_layers_match_convention() {
        assert_eq!(DEFAULT_EDIT_LAYERS, [4, 5, 6, 7, 8]);
    }

    #[test]
    fn digest_distinguishes_shapes() {
        let a = ArchDescriptor::fixture(2);
        let b = ArchDescriptor::fixture(3);
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest(), ArchDescriptor::fixture(2).digest());
    }
}
