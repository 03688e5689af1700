//! Discrete codebook adaptor hooked into the forward pass.
//!
//! Entries map a hidden-state key at one layer's output to a stored value;
//! an incoming hidden state within an entry's deferral radius is replaced
//! wholesale, anything else passes through untouched.

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodebookEntry {
    /// Hidden state at the adaptor layer's output for the edit prompt.
    pub key: Vec<f64>,
    /// Replacement hidden state, optimized so the target decodes.
    pub value: Vec<f64>,
    /// Deferral radius; strictly positive.
    pub radius: f64,
    /// Target text, kept for diagnostics.
    pub target: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Codebook {
    /// Layer whose output the adaptor intercepts; fixed once set.
    pub layer: Option<usize>,
    pub entries: Vec<CodebookEntry>,
}

impl Codebook {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn clear(&mut self) {
        self.layer = None;
        self.entries.clear();
    }

    /// Index of the nearest entry whose deferral radius contains `hidden`.
    pub fn lookup(&self, hidden: ArrayView1<f64>) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in self.entries.iter().enumerate() {
            let d = dist(hidden, &e.key);
            if d <= e.radius && best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Inference hook: substitute the stored value when a key is within
    /// its radius, otherwise return the hidden state unchanged.
    pub fn infer_hook(&self, hidden: ArrayView1<f64>) -> Array1<f64> {
        match self.lookup(hidden) {
            Some(i) => Array1::from_vec(self.entries[i].value.clone()),
            None => hidden.to_owned(),
        }
    }
}

pub(crate) fn dist(a: ArrayView1<f64>, b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn passthrough_outside_radius() {
        let cb = Codebook {
            layer: Some(0),
            entries: vec![CodebookEntry {
                key: vec![0.0, 0.0],
                value: vec![9.0, 9.0],
                radius: 1.0,
                target: "t".into(),
            }],
        };
        let h = array![5.0, 5.0];
        assert_eq!(cb.lookup(h.view()), None);
        assert_eq!(cb.infer_hook(h.view()), h);
    }

    #[test]
    fn substitutes_at_distance_zero() {
        let cb = Codebook {
            layer: Some(0),
            entries: vec![CodebookEntry {
                key: vec![1.0, 2.0],
                value: vec![-3.0, 4.0],
                radius: 0.5,
                target: "t".into(),
            }],
        };
        let h = array![1.0, 2.0];
        assert_eq!(cb.lookup(h.view()), Some(0));
        assert_eq!(cb.infer_hook(h.view()), array![-3.0, 4.0]);
    }

    #[test]
    fn nearest_entry_wins() {
        let cb = Codebook {
            layer: Some(0),
            entries: vec![
                CodebookEntry {
                    key: vec![0.0],
                    value: vec![1.0],
                    radius: 2.0,
                    target: "a".into(),
                },
                CodebookEntry {
                    key: vec![0.5],
                    value: vec![2.0],
                    radius: 2.0,
                    target: "b".into(),
                },
            ],
        };
        assert_eq!(cb.lookup(array![0.4].view()), Some(1));
    }
}
