//! Counter-based uniform edge labels.
//!
//! The label of edge `e` in sample `s` under seed `k` is the `e`-th 64-bit
//! word of ChaCha8 stream `s` keyed by `k`, truncated to 53 bits. It depends
//! on nothing else, so environments are reproducible for any worker count or
//! evaluation order.

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

const SCALE: f64 = 1.0 / (1u64 << 53) as f64;

fn to_unit(word: u64) -> f64 {
    (word >> 11) as f64 * SCALE
}

fn stream(seed: u64, sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    rng
}

/// Label of a single edge, computed without materialising the environment.
pub fn edge_label(seed: u64, sample_index: u64, edge: usize) -> f64 {
    let mut rng = stream(seed, sample_index);
    rng.set_word_pos(2 * edge as u128);
    to_unit(rng.next_u64())
}

/// One percolation sample: a label in `[0, 1)` per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    seed: u64,
    sample_index: u64,
    labels: Vec<f64>,
}

impl Environment {
    pub fn new(seed: u64, sample_index: u64, edge_count: usize) -> Self {
        let mut rng = stream(seed, sample_index);
        let labels = (0..edge_count).map(|_| to_unit(rng.next_u64())).collect();
        Self {
            seed,
            sample_index,
            labels,
        }
    }

    /// Wraps explicit labels (seed and index zero).
    pub fn from_labels(labels: Vec<f64>) -> Result<Self> {
        if let Some(x) = labels.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return invalid(format!("label {x} outside [0, 1)"));
        }
        Ok(Self {
            seed: 0,
            sample_index: 0,
            labels,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sample_index(&self) -> u64 {
        self.sample_index
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Open edges at density `p`: those with label strictly below `p`.
    pub fn open_mask(&self, p: f64) -> Vec<bool> {
        self.labels.iter().map(|&x| x < p).collect()
    }
}
