//! Objective functions: the 1-D synthetic benchmarks, convex quadratics for
//! the online-learning experiments, the classification loss, and a small MLP
//! with exact backpropagation. A central-difference oracle cross-checks every
//! analytic gradient.

mod dataset;
mod loss;
mod mlp;
mod synthetic;

pub use dataset::{generate_two_moons, Dataset};
pub use loss::{cross_entropy_loss, regularization_loss};
pub use mlp::MlpModel;
pub use synthetic::{eval_f1, eval_f2, eval_f3, SyntheticFunction};

use alloc::string::String;
use alloc::vec::Vec;

/// Value-and-gradient interface over a flat parameter vector.
pub trait Objective {
    fn dim(&self) -> usize;
    fn name(&self) -> &str;
    fn eval(&self, params: &[f64]) -> (f64, Vec<f64>);

    /// Loss only; override where the gradient allocation would be wasted.
    fn value(&self, params: &[f64]) -> f64 {
        self.eval(params).0
    }
}

/// `f(θ) = scale · Σ (θ_i - c_i)²` with exact gradient `2·scale·(θ - c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub center: Vec<f64>,
    pub scale: f64,
    name: String,
}

/// Convex quadratic centered at `center`; `scale` must be positive.
pub fn make_quadratic(center: Vec<f64>, scale: f64) -> Quadratic {
    assert!(scale > 0.0, "scale must be positive");
    Quadratic {
        center,
        scale,
        name: String::from("quadratic"),
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, params: &[f64]) -> (f64, Vec<f64>) {
        debug_assert_eq!(params.len(), self.center.len());
        let mut loss = 0.0;
        let grad = params
            .iter()
            .zip(&self.center)
            .map(|(p, c)| {
                let d = p - c;
                loss += self.scale * d * d;
                2.0 * self.scale * d
            })
            .collect();
        (loss, grad)
    }

    fn value(&self, params: &[f64]) -> f64 {
        params
            .iter()
            .zip(&self.center)
            .map(|(p, c)| {
                let d = p - c;
                self.scale * d * d
            })
            .sum()
    }
}

/// Central-difference gradient `(f(x + h·e_i) - f(x - h·e_i)) / 2h`.
pub fn finite_diff_grad<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Vec<f64> {
    assert!(h > 0.0, "step size must be positive");
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let xi = x[i];
            probe[i] = xi + h;
            let hi = f(&probe);
            probe[i] = xi - h;
            let lo = f(&probe);
            probe[i] = xi;
            (hi - lo) / (2.0 * h)
        })
        .collect()
}

/// Wraps an objective's scalar loss for the finite-difference oracle.
pub fn value_fn<O: Objective>(objective: &O) -> impl Fn(&[f64]) -> f64 + '_ {
    move |x| objective.value(x)
}
