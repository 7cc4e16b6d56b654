//! The three 1-D non-convex benchmark functions.
//!
//! All three are piecewise; at a boundary the piece whose closed inequality
//! (`x <= a`) contains the point supplies both the value and the derivative,
//! so evaluation is deterministic everywhere.

use alloc::vec;
use alloc::vec::Vec;

use libm::{cos, sin};

use super::Objective;

/// F1: a parabola pair with the global minimum at x = -0.3 (value 0) and a
/// local minimum at x = 0.2 (value 0.05).
pub fn eval_f1(x: f64) -> (f64, f64) {
    if x <= 0.0 {
        let d = x + 0.3;
        (d * d, 2.0 * d)
    } else {
        let d = x - 0.2;
        (d * d + 0.05, 2.0 * d)
    }
}

/// F2: a steep linear ramp glued to a cubic-plus-sine ripple.
pub fn eval_f2(x: f64) -> (f64, f64) {
    if x <= -0.9 {
        (-40.0 * x - 35.15, -40.0)
    } else {
        let value = x * x * x + x * sin(8.0 * x) + 0.85;
        let grad = 3.0 * x * x + sin(8.0 * x) + 8.0 * x * cos(8.0 * x);
        (value, grad)
    }
}

/// F3: a six-piece sawtooth valley, symmetric about the global minimum at
/// x = 0 (value 0), with shelf minima on both sides.
pub fn eval_f3(x: f64) -> (f64, f64) {
    if x <= -0.5 {
        (x * x, 2.0 * x)
    } else if x <= -0.4 {
        (0.75 + x, 1.0)
    } else if x <= 0.0 {
        (-7.0 * x / 8.0, -7.0 / 8.0)
    } else if x <= 0.4 {
        (7.0 * x / 8.0, 7.0 / 8.0)
    } else if x <= 0.5 {
        (0.75 - x, -1.0)
    } else {
        (x * x, 2.0 * x)
    }
}

/// Selector for the three benchmarks, usable as a 1-D [`Objective`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticFunction {
    F1,
    F2,
    F3,
}

impl SyntheticFunction {
    pub const ALL: [SyntheticFunction; 3] =
        [SyntheticFunction::F1, SyntheticFunction::F2, SyntheticFunction::F3];

    pub fn eval_scalar(self, x: f64) -> (f64, f64) {
        match self {
            SyntheticFunction::F1 => eval_f1(x),
            SyntheticFunction::F2 => eval_f2(x),
            SyntheticFunction::F3 => eval_f3(x),
        }
    }

    /// Piece boundaries, used to exclude non-differentiable points from
    /// gradient checks.
    pub fn breakpoints(self) -> &'static [f64] {
        match self {
            SyntheticFunction::F1 => &[0.0],
            SyntheticFunction::F2 => &[-0.9],
            SyntheticFunction::F3 => &[-0.5, -0.4, 0.0, 0.4, 0.5],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SyntheticFunction::F1 => "f1",
            SyntheticFunction::F2 => "f2",
            SyntheticFunction::F3 => "f3",
        }
    }

    pub fn from_name(name: &str) -> Option<SyntheticFunction> {
        SyntheticFunction::ALL.into_iter().find(|f| f.name() == name)
    }
}

impl Objective for SyntheticFunction {
    fn dim(&self) -> usize {
        1
    }

    fn name(&self) -> &str {
        SyntheticFunction::name(*self)
    }

    fn eval(&self, params: &[f64]) -> (f64, Vec<f64>) {
        debug_assert_eq!(params.len(), 1);
        let (value, grad) = self.eval_scalar(params[0]);
        (value, vec![grad])
    }

    fn value(&self, params: &[f64]) -> f64 {
        self.eval_scalar(params[0]).0
    }
}
