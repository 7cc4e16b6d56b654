//! Two-layer ReLU perceptron with exact backpropagation.
//!
//! Parameters live in four blocks (`w1`, `b1`, `w2`, `b2`) and flatten into a
//! single vector in that order, so the model plugs directly into the
//! elementwise optimizers. `batch_loss` is the minibatch objective: mean
//! cross-entropy over the batch plus `sigma` times the quadratic
//! regularization over every parameter.

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use super::dataset::Dataset;
use super::loss::cross_entropy_loss;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub class_count: usize,
    /// Hidden weights, `hidden_dim x input_dim` row-major.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Output weights, `class_count x hidden_dim` row-major.
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpModel {
    pub fn zeros(input_dim: usize, hidden_dim: usize, class_count: usize) -> Self {
        Self {
            input_dim,
            hidden_dim,
            class_count,
            w1: vec![0.0; hidden_dim * input_dim],
            b1: vec![0.0; hidden_dim],
            w2: vec![0.0; class_count * hidden_dim],
            b2: vec![0.0; class_count],
        }
    }

    /// Weights uniform in [-s, s] with s = sqrt(6 / (fan_in + fan_out)),
    /// biases zero.
    pub fn init_xavier(
        input_dim: usize,
        hidden_dim: usize,
        class_count: usize,
        rng: &mut SplitMix64,
    ) -> Self {
        let mut model = Self::zeros(input_dim, hidden_dim, class_count);
        let s1 = sqrt(6.0 / (input_dim + hidden_dim) as f64);
        for w in &mut model.w1 {
            *w = rng.next_range(-s1, s1);
        }
        let s2 = sqrt(6.0 / (hidden_dim + class_count) as f64);
        for w in &mut model.w2 {
            *w = rng.next_range(-s2, s2);
        }
        model
    }

    pub fn param_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(self.param_count());
        flat.extend_from_slice(&self.w1);
        flat.extend_from_slice(&self.b1);
        flat.extend_from_slice(&self.w2);
        flat.extend_from_slice(&self.b2);
        flat
    }

    pub fn set_from_flat(&mut self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.param_count() {
            return Err(Error::LengthMismatch {
                what: "flattened parameters",
                expected: self.param_count(),
                actual: flat.len(),
            });
        }
        let (w1, rest) = flat.split_at(self.w1.len());
        let (b1, rest) = rest.split_at(self.b1.len());
        let (w2, b2) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(w1);
        self.b1.copy_from_slice(b1);
        self.w2.copy_from_slice(w2);
        self.b2.copy_from_slice(b2);
        Ok(())
    }

    /// Class scores `w2 · relu(w1 · x + b1) + b2`.
    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim {
            return Err(Error::LengthMismatch {
                what: "mlp input",
                expected: self.input_dim,
                actual: input.len(),
            });
        }
        let hidden = self.hidden_activations(input);
        Ok(self.output_scores(&hidden))
    }

    fn hidden_activations(&self, input: &[f64]) -> Vec<f64> {
        (0..self.hidden_dim)
            .map(|i| {
                let row = &self.w1[i * self.input_dim..(i + 1) * self.input_dim];
                let z = self.b1[i]
                    + row
                        .iter()
                        .zip(input)
                        .map(|(w, x)| w * x)
                        .sum::<f64>();
                z.max(0.0)
            })
            .collect()
    }

    fn output_scores(&self, hidden: &[f64]) -> Vec<f64> {
        (0..self.class_count)
            .map(|k| {
                let row = &self.w2[k * self.hidden_dim..(k + 1) * self.hidden_dim];
                self.b2[k]
                    + row
                        .iter()
                        .zip(hidden)
                        .map(|(w, h)| w * h)
                        .sum::<f64>()
            })
            .collect()
    }

    pub fn predict(&self, input: &[f64]) -> Result<usize> {
        let scores = self.forward(input)?;
        let mut best = 0;
        for (k, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = k;
            }
        }
        Ok(best)
    }

    /// Mean cross-entropy over the indexed batch plus `sigma` times the
    /// regularization loss, with the exact gradient in flatten order.
    pub fn batch_loss(
        &self,
        data: &Dataset,
        indices: &[usize],
        sigma: f64,
    ) -> Result<(f64, Vec<f64>)> {
        if indices.is_empty() {
            return Err(Error::Empty("minibatch"));
        }
        let nb = indices.len() as f64;
        let mut data_loss = 0.0;
        let mut gw1 = vec![0.0; self.w1.len()];
        let mut gb1 = vec![0.0; self.b1.len()];
        let mut gw2 = vec![0.0; self.w2.len()];
        let mut gb2 = vec![0.0; self.b2.len()];

        for &idx in indices {
            let input = &data.inputs[idx];
            let label = data.labels[idx];
            if input.len() != self.input_dim {
                return Err(Error::LengthMismatch {
                    what: "mlp input",
                    expected: self.input_dim,
                    actual: input.len(),
                });
            }
            let hidden = self.hidden_activations(input);
            let scores = self.output_scores(&hidden);
            let (loss, dscores) = cross_entropy_loss(&scores, label)?;
            data_loss += loss;

            // Output layer.
            for (k, ds) in dscores.iter().enumerate() {
                gb2[k] += ds;
                let row = &mut gw2[k * self.hidden_dim..(k + 1) * self.hidden_dim];
                for (i, h) in hidden.iter().enumerate() {
                    row[i] += ds * h;
                }
            }
            // Back through relu into the hidden layer. hidden[i] > 0 iff the
            // preactivation was positive, so it doubles as the relu mask.
            for i in 0..self.hidden_dim {
                if hidden[i] <= 0.0 {
                    continue;
                }
                let mut dh = 0.0;
                for (k, ds) in dscores.iter().enumerate() {
                    dh += self.w2[k * self.hidden_dim + i] * ds;
                }
                gb1[i] += dh;
                let row = &mut gw1[i * self.input_dim..(i + 1) * self.input_dim];
                for (j, x) in input.iter().enumerate() {
                    row[j] += dh * x;
                }
            }
        }

        let mut grad = Vec::with_capacity(self.param_count());
        grad.extend(gw1.iter().map(|g| g / nb));
        grad.extend(gb1.iter().map(|g| g / nb));
        grad.extend(gw2.iter().map(|g| g / nb));
        grad.extend(gb2.iter().map(|g| g / nb));

        let mut total = data_loss / nb;
        if sigma != 0.0 {
            let flat = self.flatten();
            let mut reg = 0.0;
            for (g, p) in grad.iter_mut().zip(&flat) {
                reg += p * p;
                *g += sigma * 2.0 * p;
            }
            total += sigma * reg;
        }
        Ok((total, grad))
    }

    /// Fraction of the dataset classified correctly.
    pub fn accuracy(&self, data: &Dataset) -> Result<f64> {
        if data.inputs.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        let mut correct = 0usize;
        for (input, label) in data.inputs.iter().zip(&data.labels) {
            if self.predict(input)? == *label {
                correct += 1;
            }
        }
        Ok(correct as f64 / data.inputs.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{finite_diff_grad, generate_two_moons};

    #[test]
    fn zero_weights_give_zero_scores() {
        let model = MlpModel::zeros(3, 4, 2);
        let scores = model.forward(&[1.0, -2.0, 0.5]).unwrap();
        assert_eq!(scores, vec![0.0, 0.0]);
    }

    #[test]
    fn hand_computed_one_one_one_model() {
        let mut model = MlpModel::zeros(1, 1, 1);
        model.w1[0] = 2.0;
        model.b1[0] = 0.5;
        model.w2[0] = -1.5;
        model.b2[0] = 0.25;
        // relu(2*1 + 0.5) = 2.5; -1.5*2.5 + 0.25 = -3.5
        assert_eq!(model.forward(&[1.0]).unwrap(), vec![-3.5]);
    }

    #[test]
    fn relu_kills_negative_preactivations() {
        let mut model = MlpModel::zeros(1, 2, 2);
        model.w1 = vec![1.0, 1.0];
        model.b1 = vec![0.0, 0.0];
        model.w2 = vec![3.0, -2.0, 1.0, 4.0];
        model.b2 = vec![0.7, -0.2];
        // Negative input drives both hidden preactivations negative.
        assert_eq!(model.forward(&[-1.0]).unwrap(), vec![0.7, -0.2]);
    }

    #[test]
    fn forward_rejects_wrong_input_length() {
        let model = MlpModel::zeros(2, 2, 2);
        assert!(model.forward(&[1.0]).is_err());
    }

    #[test]
    fn flatten_round_trips_exactly() {
        let mut rng = SplitMix64::new(17);
        let model = MlpModel::init_xavier(3, 5, 2, &mut rng);
        let flat = model.flatten();
        assert_eq!(flat.len(), model.param_count());
        let mut copy = MlpModel::zeros(3, 5, 2);
        copy.set_from_flat(&flat).unwrap();
        assert_eq!(copy, model);
        assert_eq!(copy.flatten(), flat);
        assert!(copy.set_from_flat(&flat[1..]).is_err());
    }

    #[test]
    fn zero_weight_batch_loss_is_ln_two() {
        let model = MlpModel::zeros(2, 4, 2);
        let data = generate_two_moons(8, 0.1, 1).unwrap();
        let indices: Vec<usize> = (0..8).collect();
        let (loss, _) = model.batch_loss(&data, &indices, 0.0).unwrap();
        assert!((loss - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn empty_batch_rejected() {
        let model = MlpModel::zeros(2, 4, 2);
        let data = generate_two_moons(4, 0.1, 1).unwrap();
        assert!(model.batch_loss(&data, &[], 0.0).is_err());
    }

    #[test]
    fn sigma_zero_means_pure_cross_entropy() {
        let mut rng = SplitMix64::new(2);
        let model = MlpModel::init_xavier(2, 4, 2, &mut rng);
        let data = generate_two_moons(8, 0.2, 3).unwrap();
        let indices: Vec<usize> = (0..8).collect();
        let (loss, _) = model.batch_loss(&data, &indices, 0.0).unwrap();
        let mut mean_ce = 0.0;
        for i in 0..8 {
            let scores = model.forward(&data.inputs[i]).unwrap();
            mean_ce += cross_entropy_loss(&scores, data.labels[i]).unwrap().0;
        }
        mean_ce /= 8.0;
        assert!((loss - mean_ce).abs() < 1e-15);
    }

    #[test]
    fn batch_gradient_matches_finite_differences() {
        // 2-4-2 model, 8 samples, h = 1e-5, including a nonzero sigma.
        let mut rng = SplitMix64::new(12);
        let model = MlpModel::init_xavier(2, 4, 2, &mut rng);
        let data = generate_two_moons(8, 0.2, 7).unwrap();
        let indices: Vec<usize> = (0..8).collect();
        let sigma = 0.01;
        let (_, analytic) = model.batch_loss(&data, &indices, sigma).unwrap();
        let theta = model.flatten();
        let numeric = finite_diff_grad(
            |flat| {
                let mut probe = MlpModel::zeros(2, 4, 2);
                probe.set_from_flat(flat).unwrap();
                probe.batch_loss(&data, &indices, sigma).unwrap().0
            },
            &theta,
            1e-5,
        );
        for (i, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
            let rel = (a - n).abs() / a.abs().max(n.abs()).max(1.0);
            assert!(rel < 1e-5, "coordinate {i}: analytic {a} vs numeric {n}");
        }
    }
}
