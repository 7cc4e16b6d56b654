//! Stateful step engines for the eight optimizer families.
//!
//! Every engine operates elementwise on a flat parameter vector and keeps its
//! mutable buffers in an [`OptimizerState`]. A step is a pure function of
//! `(state, params, grads, spec)`: it returns the updated parameters in a
//! [`StepReport`] and advances the state, so identical inputs always produce
//! identical outputs.
//!
//! Update rules (per coordinate, iteration `t` starting at 1):
//!
//! | algorithm | rule |
//! |-----------|------|
//! | sgd       | `θ' = θ - α g` |
//! | sgdm      | `m = βm + g`; `θ' = θ - α m` |
//! | adagrad   | `G += g²`; `θ' = θ - α g / √(G + ε)` |
//! | adadelta  | `E[g²] = ρE[g²] + (1-ρ)g²`; `Δθ = -√(E[Δθ²]+ε)/√(E[g²]+ε) · g`; `E[Δθ²] = ρE[Δθ²] + (1-ρ)Δθ²` |
//! | rmsprop   | `G = β₂G + (1-β₂)g²`; `θ' = θ - α g / √(G + ε)` |
//! | adam      | `m = β₁m + (1-β₁)g`; `v = β₂v + (1-β₂)g²`; `m̂ = m/(1-β₁ᵗ)`; `v̂ = v/(1-β₂ᵗ)`; `θ' = θ - α m̂ / √(v̂ + ε)` |
//! | amsgrad   | Adam moments; `v̂ᵐᵃˣ = max(v̂ᵐᵃˣ, v̂)`; `θ' = θ - α m̂ / √(v̂ᵐᵃˣ + ε)` |
//! | diffgrad  | Adam moments; `ξ = dfc(g_{t-1} - g_t)`; `θ' = θ - α ξ m̂ / (√v̂ + ε)` |
//!
//! Adam places ε inside the square root and diffGrad outside; each algorithm
//! defaults to its own form and [`EpsPlacement`] overrides it, which is what
//! makes the `unit`-variant degeneration to Adam exact.

mod dfc;
mod steps;

pub use dfc::{abs_sig, dfc, grad_batch_stats, DfcVariant};
pub use steps::{
    adadelta_step, adagrad_step, adam_step, amsgrad_step, diffgrad_step, rmsprop_step, sgd_step,
    sgdm_step,
};

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Optimizer family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Sgd,
    Sgdm,
    Adagrad,
    Adadelta,
    Rmsprop,
    Adam,
    Amsgrad,
    Diffgrad,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Sgd,
        Algorithm::Sgdm,
        Algorithm::Adagrad,
        Algorithm::Adadelta,
        Algorithm::Rmsprop,
        Algorithm::Adam,
        Algorithm::Amsgrad,
        Algorithm::Diffgrad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sgd => "sgd",
            Algorithm::Sgdm => "sgdm",
            Algorithm::Adagrad => "adagrad",
            Algorithm::Adadelta => "adadelta",
            Algorithm::Rmsprop => "rmsprop",
            Algorithm::Adam => "adam",
            Algorithm::Amsgrad => "amsgrad",
            Algorithm::Diffgrad => "diffgrad",
        }
    }

    pub fn from_name(name: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl DfcVariant {
    pub const ALL: [DfcVariant; 7] = [
        DfcVariant::Dfc0,
        DfcVariant::Dfc1,
        DfcVariant::Dfc2,
        DfcVariant::Dfc3,
        DfcVariant::Dfc4,
        DfcVariant::Dfc5,
        DfcVariant::Unit,
    ];

    pub fn from_name(name: &str) -> Option<DfcVariant> {
        DfcVariant::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// Where ε sits in the denominator of moment-normalized updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsPlacement {
    /// `√(v̂ + ε)` — the Adam form.
    InsideSqrt,
    /// `√v̂ + ε` — the diffGrad form.
    OutsideSqrt,
}

impl EpsPlacement {
    pub fn name(self) -> &'static str {
        match self {
            EpsPlacement::InsideSqrt => "inside",
            EpsPlacement::OutsideSqrt => "outside",
        }
    }

    pub fn from_name(name: &str) -> Option<EpsPlacement> {
        match name {
            "inside" => Some(EpsPlacement::InsideSqrt),
            "outside" => Some(EpsPlacement::OutsideSqrt),
            _ => None,
        }
    }
}

/// Learning-rate schedule α_t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LrSchedule {
    /// α_t = α.
    #[default]
    Constant,
    /// α_t = α / √t, the schedule assumed by the regret analysis.
    InvSqrtT,
}

/// Algorithm identifier plus hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSpec {
    pub algorithm: Algorithm,
    /// Base learning rate α. Unused by adadelta.
    pub lr: f64,
    /// First-moment decay β₁ (adam family).
    pub beta1: f64,
    /// Second-moment / leak decay β₂ (adam family, rmsprop).
    pub beta2: f64,
    /// Momentum β for sgdm.
    pub momentum: f64,
    /// Squared-average decay ρ for adadelta.
    pub rho: f64,
    pub epsilon: f64,
    pub eps_placement: EpsPlacement,
    pub dfc_variant: DfcVariant,
    pub lr_schedule: LrSchedule,
    /// Optional first-moment decay schedule β_{1,t} = β₁ λ^{t-1}.
    /// Off by default; enabled for the regret-bound experiment.
    pub beta1_decay_lambda: Option<f64>,
}

impl OptimizerSpec {
    /// Spec with the algorithm's own defaults (Adam-convention rates,
    /// each algorithm's customary ε and placement).
    pub fn new(algorithm: Algorithm) -> Self {
        let mut spec = Self {
            algorithm,
            lr: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            momentum: 0.9,
            rho: 0.9,
            epsilon: 1e-8,
            eps_placement: EpsPlacement::InsideSqrt,
            dfc_variant: DfcVariant::Dfc0,
            lr_schedule: LrSchedule::Constant,
            beta1_decay_lambda: None,
        };
        match algorithm {
            Algorithm::Sgd | Algorithm::Sgdm | Algorithm::Adagrad => spec.lr = 0.1,
            Algorithm::Adadelta => {
                spec.lr = 1.0; // ignored by the update rule
                spec.epsilon = 1e-6;
            }
            Algorithm::Rmsprop => {
                spec.lr = 0.01;
                spec.beta2 = 0.99;
            }
            Algorithm::Adam | Algorithm::Amsgrad => {}
            Algorithm::Diffgrad => {
                spec.epsilon = 1e-7;
                spec.eps_placement = EpsPlacement::OutsideSqrt;
            }
        }
        spec
    }

    pub fn with_lr(mut self, lr: f64) -> Self {
        self.lr = lr;
        self
    }

    pub fn with_betas(mut self, beta1: f64, beta2: f64) -> Self {
        self.beta1 = beta1;
        self.beta2 = beta2;
        self
    }

    pub fn with_momentum(mut self, momentum: f64) -> Self {
        self.momentum = momentum;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_eps_placement(mut self, placement: EpsPlacement) -> Self {
        self.eps_placement = placement;
        self
    }

    pub fn with_dfc_variant(mut self, variant: DfcVariant) -> Self {
        self.dfc_variant = variant;
        self
    }

    pub fn with_lr_schedule(mut self, schedule: LrSchedule) -> Self {
        self.lr_schedule = schedule;
        self
    }

    pub fn with_beta1_decay(mut self, lambda: f64) -> Self {
        self.beta1_decay_lambda = Some(lambda);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidSpec("lr must be positive and finite"));
        }
        if !(0.0..1.0).contains(&self.beta1) {
            return Err(Error::InvalidSpec("beta1 must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::InvalidSpec("beta2 must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidSpec("momentum must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(Error::InvalidSpec("rho must lie in [0, 1)"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidSpec("epsilon must be positive and finite"));
        }
        if self.dfc_variant == DfcVariant::Unit && self.algorithm != Algorithm::Diffgrad {
            return Err(Error::InvalidSpec("unit variant is only legal with diffgrad"));
        }
        if let Some(lambda) = self.beta1_decay_lambda {
            if !(lambda > 0.0 && lambda < 1.0) {
                return Err(Error::InvalidSpec("beta1 decay lambda must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    /// Learning rate effective at iteration `t` (1-based).
    pub fn lr_at(&self, t: u64) -> f64 {
        match self.lr_schedule {
            LrSchedule::Constant => self.lr,
            LrSchedule::InvSqrtT => self.lr / libm::sqrt(t as f64),
        }
    }

    /// First-moment decay effective at iteration `t` (1-based).
    pub fn beta1_at(&self, t: u64) -> f64 {
        match self.beta1_decay_lambda {
            None => self.beta1,
            Some(lambda) => self.beta1 * libm::pow(lambda, (t - 1) as f64),
        }
    }
}

/// Per-algorithm mutable buffers, all sized to the parameter count.
///
/// Buffers not used by the active algorithm stay at zero. `v_max` and
/// `accum_g2` are per-coordinate nondecreasing under amsgrad and adagrad
/// respectively; `prev_grad` carries g_{t-1} across steps and is zero before
/// the first step.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    /// Completed iterations; the first step runs at t = 1.
    pub t: u64,
    /// First moment m.
    pub m: Vec<f64>,
    /// Second moment v.
    pub v: Vec<f64>,
    /// Running max of bias-corrected second moments (amsgrad).
    pub v_max: Vec<f64>,
    /// Accumulated squared gradients (adagrad G, rmsprop/adadelta leaky `E[g²]`).
    pub accum_g2: Vec<f64>,
    /// Leaky average of squared updates `E[Δθ²]` (adadelta).
    pub accum_dx2: Vec<f64>,
    /// Previous gradient g_{t-1} (diffgrad).
    pub prev_grad: Vec<f64>,
}

impl OptimizerState {
    pub fn new(dim: usize) -> Self {
        Self {
            t: 0,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            v_max: vec![0.0; dim],
            accum_g2: vec![0.0; dim],
            accum_dx2: vec![0.0; dim],
            prev_grad: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }
}

/// Outcome of one optimizer step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub updated_params: Vec<f64>,
    /// Mean friction coefficient over coordinates; exactly 1.0 for
    /// non-diffgrad algorithms.
    pub mean_dfc: f64,
    pub max_abs_update: f64,
}

/// Dispatches one step of `spec.algorithm`.
pub fn step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    spec.validate()?;
    match spec.algorithm {
        Algorithm::Sgd => sgd_step(state, params, grads, spec),
        Algorithm::Sgdm => sgdm_step(state, params, grads, spec),
        Algorithm::Adagrad => adagrad_step(state, params, grads, spec),
        Algorithm::Adadelta => adadelta_step(state, params, grads, spec),
        Algorithm::Rmsprop => rmsprop_step(state, params, grads, spec),
        Algorithm::Adam => adam_step(state, params, grads, spec),
        Algorithm::Amsgrad => amsgrad_step(state, params, grads, spec),
        Algorithm::Diffgrad => diffgrad_step(state, params, grads, spec),
    }
}

/// Owned spec + state pair for driving an optimization loop.
#[derive(Debug, Clone)]
pub struct Optimizer {
    pub spec: OptimizerSpec,
    pub state: OptimizerState,
}

impl Optimizer {
    pub fn new(spec: OptimizerSpec, dim: usize) -> Result<Self> {
        spec.validate()?;
        Ok(Self {
            spec,
            state: OptimizerState::new(dim),
        })
    }

    pub fn step(&mut self, params: &[f64], grads: &[f64]) -> Result<StepReport> {
        step(&mut self.state, params, grads, &self.spec)
    }
}
