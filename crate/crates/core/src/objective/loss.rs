//! Cross-entropy classification loss and the quadratic regularization term.

use alloc::vec::Vec;

use libm::{exp, log};

use crate::error::{Error, Result};

/// Softmax cross-entropy of `scores` against `label`.
///
/// Returns the loss and its gradient with respect to the scores,
/// `softmax(scores) - onehot(label)`. The softmax subtracts the max score
/// so large logits cannot overflow.
pub fn cross_entropy_loss(scores: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    if scores.is_empty() {
        return Err(Error::Empty("score vector"));
    }
    if label >= scores.len() {
        return Err(Error::LabelOutOfRange {
            label,
            classes: scores.len(),
        });
    }
    let max = scores.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut total = 0.0;
    let mut probs: Vec<f64> = scores
        .iter()
        .map(|s| {
            let e = exp(s - max);
            total += e;
            e
        })
        .collect();
    for p in &mut probs {
        *p /= total;
    }
    let loss = -(scores[label] - max - log(total));
    probs[label] -= 1.0;
    Ok((loss, probs))
}

/// `R(θ) = Σ θ_i²` with gradient `2θ`.
pub fn regularization_loss(params: &[f64]) -> (f64, Vec<f64>) {
    let loss = params.iter().map(|p| p * p).sum();
    let grad = params.iter().map(|p| 2.0 * p).collect();
    (loss, grad)
}
