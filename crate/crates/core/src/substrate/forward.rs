//! Forward pass with full activation trace.
//!
//! Layer layout (pre-norm residual blocks, RMS norms, ReLU MLP):
//!
//! ```text
//! x   = embed[tok] + pos[p]
//! x  += Wo . attn( rmsnorm(x) * g1 )          (causal multi-head)
//! x  += Wdown . relu( Wup . (rmsnorm(x) * g2) )
//! logits = U . ( rmsnorm(x) * gf )
//! ```
//!
//! The trace keeps every intermediate needed by the backward pass. A
//! `Patch` substitutes a vector at one (layer, position): either the MLP
//! output (the locate-then-edit value site) or the whole residual output
//! (the codebook adaptor site).

use super::handle::ModelParams;
use super::tokenizer::TokenId;
use super::Codebook;
use ndarray::{s, Array1, Array2};

const NORM_EPS: f64 = 1e-6;

/// Vector substitution at one (layer, position).
#[derive(Debug, Clone)]
pub enum Patch {
    /// Replace the MLP output (before the residual add).
    MlpOut {
        layer: usize,
        position: usize,
        vector: Array1<f64>,
    },
    /// Replace the layer's residual output entirely.
    Resid {
        layer: usize,
        position: usize,
        vector: Array1<f64>,
    },
}

impl Patch {
    pub fn layer(&self) -> usize {
        match self {
            Patch::MlpOut { layer, .. } | Patch::Resid { layer, .. } => *layer,
        }
    }
    pub fn position(&self) -> usize {
        match self {
            Patch::MlpOut { position, .. } | Patch::Resid { position, .. } => *position,
        }
    }
}

/// Forward-pass switches.
#[derive(Default)]
pub struct FwdOptions<'a> {
    pub patch: Option<&'a Patch>,
    /// Extra matrices added to the effective down-projection per layer.
    pub overlay: Option<&'a std::collections::BTreeMap<usize, Array2<f64>>>,
    /// Apply the codebook adaptor when it has entries.
    pub adaptor: bool,
}

pub(crate) struct LayerTrace {
    pub attn_in: Array2<f64>,  // n x d, input to the layer
    pub h1: Array2<f64>,       // n x d, post-norm attention input
    pub q: Array2<f64>,        // n x d
    pub k: Array2<f64>,        // n x d
    pub v: Array2<f64>,        // n x d
    pub probs: Vec<Array2<f64>>, // per head: n x n causal attention
    pub att_mix: Array2<f64>,  // n x d, concatenated head contexts
    pub x_mid: Array2<f64>,    // n x d, after attention residual
    pub h2: Array2<f64>,       // n x d, post-norm MLP input
    pub inner: Array2<f64>,    // n x m, relu(Wup h2): the edit keys
    pub mlp: Array2<f64>,      // n x d, after any MlpOut patch
    pub x_out: Array2<f64>,    // n x d, after patches and adaptor
    /// Positions whose residual output was overwritten by the adaptor.
    pub adaptor_hits: Vec<(usize, usize)>,
}

pub struct ForwardTrace {
    pub(crate) layers: Vec<LayerTrace>,
    pub(crate) final_in: Array2<f64>,  // n x d, before the final norm
    pub(crate) final_out: Array2<f64>, // n x d, after the final norm
    pub logits: Array2<f64>,           // n x V
    pub seq_len: usize,
}

impl ForwardTrace {
    /// Key vector (MLP down-projection input) at a layer and position.
    pub fn key_at(&self, layer: usize, position: usize) -> Array1<f64> {
        self.layers[layer].inner.row(position).to_owned()
    }

    /// MLP output at a layer and position (post-patch).
    pub fn mlp_out_at(&self, layer: usize, position: usize) -> Array1<f64> {
        self.layers[layer].mlp.row(position).to_owned()
    }

    /// Residual-stream output of a layer at a position, before the
    /// adaptor had a chance to overwrite it.
    pub fn resid_out_pre_adaptor(&self, layer: usize, position: usize) -> Array1<f64> {
        let lt = &self.layers[layer];
        if lt.adaptor_hits.iter().any(|&(p, _)| p == position) {
            // Reconstruct: x_mid + mlp is the pre-adaptor value.
            (&lt.x_mid.row(position) + &lt.mlp.row(position)).to_owned()
        } else {
            lt.x_out.row(position).to_owned()
        }
    }

    pub fn adaptor_hits(&self, layer: usize) -> &[(usize, usize)] {
        &self.layers[layer].adaptor_hits
    }
}

pub(crate) fn rmsnorm(x: &Array1<f64>, gain: &Array1<f64>) -> Array1<f64> {
    let ms = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    let r = (ms + NORM_EPS).sqrt();
    let mut out = x / r;
    out *= gain;
    out
}

fn rmsnorm_rows(x: &Array2<f64>, gain: &Array1<f64>) -> Array2<f64> {
    let mut out = Array2::zeros(x.raw_dim());
    for (i, row) in x.rows().into_iter().enumerate() {
        out.row_mut(i).assign(&rmsnorm(&row.to_owned(), gain));
    }
    out
}

pub(crate) fn forward(
    params: &ModelParams,
    tokens: &[TokenId],
    opts: &FwdOptions,
    codebook: &Codebook,
) -> ForwardTrace {
    let arch = &params.arch;
    let n = tokens.len();
    let d = arch.hidden;
    let nh = arch.heads;
    let dh = arch.head_dim();
    let scale = 1.0 / (dh as f64).sqrt();

    let mut x = Array2::zeros((n, d));
    for (p, &t) in tokens.iter().enumerate() {
        let e = &params.embed.row(t as usize) + &params.pos.row(p);
        x.row_mut(p).assign(&e);
    }

    let mut layers = Vec::with_capacity(arch.layers);
    for l in 0..arch.layers {
        let lp = &params.layers[l];
        let attn_in = x.clone();
        let h1 = rmsnorm_rows(&attn_in, &lp.attn_norm);
        let q = h1.dot(&lp.wq.t());
        let k = h1.dot(&lp.wk.t());
        let v = h1.dot(&lp.wv.t());

        let mut att_mix = Array2::zeros((n, d));
        let mut probs = Vec::with_capacity(nh);
        for h in 0..nh {
            let cols = s![.., h * dh..(h + 1) * dh];
            let qh = q.slice(cols);
            let kh = k.slice(cols);
            let vh = v.slice(cols);
            let mut p_mat = Array2::zeros((n, n));
            for i in 0..n {
                // causal softmax over positions 0..=i
                let mut row = Array1::zeros(i + 1);
                for j in 0..=i {
                    row[j] = qh.row(i).dot(&kh.row(j)) * scale;
                }
                let mx = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut sum = 0.0;
                for j in 0..=i {
                    row[j] = (row[j] - mx).exp();
                    sum += row[j];
                }
                for j in 0..=i {
                    p_mat[[i, j]] = row[j] / sum;
                }
            }
            let ctx = p_mat.dot(&vh);
            att_mix.slice_mut(cols).assign(&ctx);
            probs.push(p_mat);
        }
        let attn_out = att_mix.dot(&lp.wo.t());
        let x_mid = &attn_in + &attn_out;

        let h2 = rmsnorm_rows(&x_mid, &lp.mlp_norm);
        let pre = h2.dot(&lp.w_up.t());
        let inner = pre.mapv(|v| if v > 0.0 { v } else { 0.0 });
        let w_down = params.w_down_eff(l, opts.overlay);
        let mut mlp = inner.dot(&w_down.t());

        if let Some(Patch::MlpOut { layer, position, vector }) = opts.patch {
            if *layer == l {
                mlp.row_mut(*position).assign(vector);
            }
        }

        let mut x_out = &x_mid + &mlp;
        let mut patched_resid = None;
        if let Some(Patch::Resid { layer, position, vector }) = opts.patch {
            if *layer == l {
                x_out.row_mut(*position).assign(vector);
                patched_resid = Some(*position);
            }
        }

        let mut adaptor_hits = Vec::new();
        if opts.adaptor && codebook.layer == Some(l) && !codebook.is_empty() {
            for p in 0..n {
                if patched_resid == Some(p) {
                    continue;
                }
                if let Some(idx) = codebook.lookup(x_out.row(p)) {
                    let val = Array1::from_vec(codebook.entries[idx].value.clone());
                    x_out.row_mut(p).assign(&val);
                    adaptor_hits.push((p, idx));
                }
            }
        }

        layers.push(LayerTrace {
            attn_in,
            h1,
            q,
            k,
            v,
            probs,
            att_mix,
            x_mid,
            h2,
            inner,
            mlp,
            x_out: x_out.clone(),
            adaptor_hits,
        });
        x = x_out;
    }

    let final_in = x;
    let final_out = rmsnorm_rows(&final_in, &params.final_norm);
    let logits = final_out.dot(&params.unembed.t());

    ForwardTrace {
        layers,
        final_in,
        final_out,
        logits,
        seq_len: n,
    }
}
