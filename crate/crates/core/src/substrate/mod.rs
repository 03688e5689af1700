//! Editable decoder-only transformer substrate.
//!
//! Everything the editing methods operate on lives here: tokenization,
//! deterministic greedy generation, activation probing at the MLP
//! down-projection, read/write access to the editable weights, and
//! content-addressed snapshots. The editable site is fixed to the MLP
//! down-projection of each layer, a `hidden x inner` matrix.
//!
//! Reads (`generate_greedy`, `collect_keys`, `estimate_key_covariance`)
//! take `&self` and are safe to run concurrently; writes (`set_weight`,
//! `add_weight_delta`, `restore`) take `&mut self`, so the borrow checker
//! enforces the reader-writer contract.

mod adaptor;
mod arch;
mod backward;
mod forward;
mod handle;
mod io;
mod snapshot;
mod tokenizer;

pub use adaptor::{Codebook, CodebookEntry};
pub use arch::{ArchDescriptor, EditSite, LayerSpec, DEFAULT_EDIT_LAYERS};
pub use backward::Gradients;
pub use forward::{ForwardTrace, FwdOptions, Patch};
pub use handle::{FixtureSpec, KeyFailure, KeyMatrix, ModelHandle, TextGenerator};
pub use snapshot::SnapshotId;
pub use tokenizer::{ByteTokenizer, TokenId, EOS_TOKEN};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubstrateError {
    #[error("input text is empty after trimming")]
    EmptyInput,
    #[error("prompt needs {needed} tokens but the context window is {window}")]
    ContextWindow { window: usize, needed: usize },
    #[error("layer {layer} out of range for a model with {layers} layers")]
    InvalidLayer { layer: usize, layers: usize },
    #[error("weight shape mismatch: expected {expected_rows}x{expected_cols}, got {got_rows}x{got_cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("position {position} out of range for a sequence of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("covariance is singular: all keys are zero and ridge is 0; pass a positive ridge")]
    SingularCovariance,
    #[error("layer list must be non-empty and strictly increasing, got {0:?}")]
    BadLayerSpec(Vec<usize>),
    #[error("snapshot belongs to a different architecture (snapshot {snapshot}, model {model})")]
    ArchMismatch { snapshot: String, model: String },
    #[error("unknown snapshot id {0}")]
    UnknownSnapshot(String),
    #[error("invalid model file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which token position a probe or edit key refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionSelector {
    LastToken,
    Index(usize),
}

impl PositionSelector {
    pub fn resolve(&self, seq_len: usize) -> Result<usize, SubstrateError> {
        match *self {
            PositionSelector::LastToken => {
                if seq_len == 0 {
                    Err(SubstrateError::PositionOutOfRange { position: 0, len: 0 })
                } else {
                    Ok(seq_len - 1)
                }
            }
            PositionSelector::Index(i) => {
                if i < seq_len {
                    Ok(i)
                } else {
                    Err(SubstrateError::PositionOutOfRange { position: i, len: seq_len })
                }
            }
        }
    }
}

/// Where a probe reads. Only the MLP down-projection input is exposed;
/// its activations are the keys of every locate-then-edit method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeSite {
    MlpDownInput,
}

/// A read-only activation probe. Probing never mutates parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivationProbe {
    pub layer: usize,
    pub position: PositionSelector,
    pub site: ProbeSite,
}

impl ActivationProbe {
    pub fn mlp_input(layer: usize) -> Self {
        ActivationProbe {
            layer,
            position: PositionSelector::LastToken,
            site: ProbeSite::MlpDownInput,
        }
    }
}
