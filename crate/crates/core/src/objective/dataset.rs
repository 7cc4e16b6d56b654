//! Labeled toy datasets.

use alloc::vec::Vec;

use libm::{cos, sin};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Feature vectors with class labels and the seed that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub inputs: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub seed: u64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |m| m + 1)
    }
}

/// Two interleaved half-circles with `n/2` points per class and additive
/// Gaussian noise. A pure function of `(n, noise, seed)`: the same arguments
/// reproduce the same dataset bit for bit.
pub fn generate_two_moons(n: usize, noise: f64, seed: u64) -> Result<Dataset> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::OddSampleCount(n));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::NonFinite("two-moons noise level"));
    }
    let mut rng = SplitMix64::new(seed);
    let per_class = n / 2;
    let mut inputs = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let arc = |i: usize| {
        if per_class == 1 {
            0.0
        } else {
            core::f64::consts::PI * i as f64 / (per_class - 1) as f64
        }
    };
    for i in 0..per_class {
        let t = arc(i);
        inputs.push(alloc::vec![
            cos(t) + noise * rng.next_gaussian(),
            sin(t) + noise * rng.next_gaussian(),
        ]);
        labels.push(0);
    }
    for i in 0..per_class {
        let t = arc(i);
        inputs.push(alloc::vec![
            1.0 - cos(t) + noise * rng.next_gaussian(),
            0.5 - sin(t) + noise * rng.next_gaussian(),
        ]);
        labels.push(1);
    }
    Ok(Dataset {
        inputs,
        labels,
        seed,
    })
}
