//! Deterministic experiment runners.
//!
//! Every run here is a pure function of its configuration and seed: the
//! synthetic 1-D benchmark protocol (300 iterations from θ₀ = -1 with
//! β₁ = 0.95, β₂ = 0.999, α = 0.1), the minibatch training comparison on a
//! toy dataset, and the online-regret experiment with its analytic bound.

mod csv;
mod regret;
mod svg;

pub use csv::{records_from_csv, records_to_csv, trajectory_to_csv, CSV_HEADER};
pub use regret::{
    compute_regret, run_regret_experiment, regret_bound, BoundInputs, RegretConfig,
    RegretOutcome, RegretReport,
};
pub use svg::{render_line_chart, Series};

use alloc::string::String;
use alloc::vec::Vec;

use libm::{fabs, sqrt};

use crate::error::{Error, Result};
use crate::objective::{Dataset, MlpModel, SyntheticFunction};
use crate::optim::{step, Algorithm, LrSchedule, OptimizerSpec, OptimizerState};
use crate::rng::SplitMix64;

/// One row of an experiment trace.
///
/// `loss` and `grad_norm` are measured at the pre-update iterate θ_t (the
/// value the regret definition charges for iteration t); `theta` is the
/// iterate after the update, which is what the benchmark plots track. For
/// multi-parameter runs `theta` holds the L2 norm of the parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub iteration: u64,
    pub loss: f64,
    pub theta: f64,
    pub grad_norm: f64,
    pub mean_dfc: f64,
}

/// Per-iteration records of one experiment, with the spec that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub spec: OptimizerSpec,
    pub objective_name: String,
    pub seed: u64,
}

impl Trajectory {
    pub fn final_loss(&self) -> Option<f64> {
        self.records.last().map(|r| r.loss)
    }

    pub fn final_theta(&self) -> Option<f64> {
        self.records.last().map(|r| r.theta)
    }
}

/// Benchmark-protocol hyperparameters for the 1-D experiments: α = 0.1 for
/// every family, β₁ = 0.95 and β₂ = 0.999 for the moment methods, other
/// knobs at their per-algorithm defaults.
pub fn synthetic_defaults(algorithm: Algorithm) -> OptimizerSpec {
    let spec = OptimizerSpec::new(algorithm).with_lr(0.1);
    match algorithm {
        Algorithm::Adam | Algorithm::Amsgrad | Algorithm::Diffgrad => spec.with_betas(0.95, 0.999),
        _ => spec,
    }
}

/// Calibrated defaults for the toy training comparison; frozen from a
/// one-time sweep on the two-moons task.
pub fn training_defaults(algorithm: Algorithm) -> OptimizerSpec {
    let spec = OptimizerSpec::new(algorithm);
    match algorithm {
        Algorithm::Sgd | Algorithm::Adagrad => spec.with_lr(0.1),
        Algorithm::Sgdm => spec.with_lr(0.05),
        Algorithm::Rmsprop => spec.with_lr(0.01),
        Algorithm::Adadelta => spec,
        Algorithm::Adam | Algorithm::Amsgrad | Algorithm::Diffgrad => spec.with_lr(0.01),
    }
}

/// Spec for the online-regret experiment: diffGrad under the conditions of
/// the convergence analysis (α_t = α/√t, β_{1,t} = β₁λ^{t-1} with λ close
/// to 1).
pub fn regret_defaults() -> OptimizerSpec {
    OptimizerSpec::new(Algorithm::Diffgrad)
        .with_lr(0.1)
        .with_betas(0.95, 0.999)
        .with_lr_schedule(LrSchedule::InvSqrtT)
        .with_beta1_decay(1.0 - 1e-8)
}

/// Runs `spec` on one of the 1-D benchmarks for `iters` steps from `theta0`,
/// recording loss before each update and θ after it.
pub fn run_synthetic_experiment(
    function: SyntheticFunction,
    spec: &OptimizerSpec,
    theta0: f64,
    iters: usize,
) -> Result<Trajectory> {
    if iters == 0 {
        return Err(Error::Precondition("iteration count must be at least 1"));
    }
    spec.validate()?;
    let mut state = OptimizerState::new(1);
    let mut theta = theta0;
    let mut records = Vec::with_capacity(iters);
    for t in 1..=iters as u64 {
        let (loss, grad) = function.eval_scalar(theta);
        let report = step(&mut state, &[theta], &[grad], spec)?;
        theta = report.updated_params[0];
        records.push(TrajectoryRecord {
            iteration: t,
            loss,
            theta,
            grad_norm: fabs(grad),
            mean_dfc: report.mean_dfc,
        });
    }
    Ok(Trajectory {
        records,
        spec: spec.clone(),
        objective_name: String::from(function.name()),
        seed: 0,
    })
}

fn l2_norm(v: &[f64]) -> f64 {
    sqrt(v.iter().map(|x| x * x).sum())
}

/// Minibatch training of a two-layer MLP with per-epoch records.
///
/// The seed splits into independent streams for weight initialization and
/// epoch shuffling. Records hold the sample-weighted mean batch loss of the
/// epoch, the parameter norm after it, and the mean batch gradient norm and
/// friction coefficient. Returns the trajectory and the final training-set
/// accuracy; zero epochs returns an empty trajectory and the accuracy of the
/// freshly initialized model.
pub fn run_training_experiment(
    data: &Dataset,
    hidden_dim: usize,
    spec: &OptimizerSpec,
    epochs: usize,
    batch_size: usize,
    sigma: f64,
    seed: u64,
) -> Result<(Trajectory, f64)> {
    if data.is_empty() {
        return Err(Error::Empty("training dataset"));
    }
    if batch_size == 0 || batch_size > data.len() {
        return Err(Error::BadWindow {
            window: batch_size,
            len: data.len(),
        });
    }
    spec.validate()?;
    let input_dim = data.inputs[0].len();
    let classes = data.class_count();
    let mut root = SplitMix64::new(seed);
    let mut init_rng = root.split();
    let mut shuffle_rng = root.split();
    let mut model = MlpModel::init_xavier(input_dim, hidden_dim, classes, &mut init_rng);
    let mut theta = model.flatten();
    let mut state = OptimizerState::new(theta.len());

    let n = data.len();
    let mut indices: Vec<usize> = (0..n).collect();
    let mut records = Vec::with_capacity(epochs);
    for epoch in 1..=epochs as u64 {
        shuffle_rng.shuffle(&mut indices);
        let mut epoch_loss = 0.0;
        let mut grad_norm_sum = 0.0;
        let mut dfc_sum = 0.0;
        let mut batches = 0.0;
        for batch in indices.chunks(batch_size) {
            model.set_from_flat(&theta)?;
            let (loss, grad) = model.batch_loss(data, batch, sigma)?;
            let report = step(&mut state, &theta, &grad, spec)?;
            theta = report.updated_params;
            epoch_loss += loss * batch.len() as f64;
            grad_norm_sum += l2_norm(&grad);
            dfc_sum += report.mean_dfc;
            batches += 1.0;
        }
        records.push(TrajectoryRecord {
            iteration: epoch,
            loss: epoch_loss / n as f64,
            theta: l2_norm(&theta),
            grad_norm: grad_norm_sum / batches,
            mean_dfc: dfc_sum / batches,
        });
    }
    model.set_from_flat(&theta)?;
    let accuracy = model.accuracy(data)?;
    Ok((
        Trajectory {
            records,
            spec: spec.clone(),
            objective_name: String::from("two-moons-mlp"),
            seed,
        },
        accuracy,
    ))
}

/// Population standard deviation of θ over the last `window` records.
pub fn oscillation_metric(traj: &Trajectory, window: usize) -> Result<f64> {
    let len = traj.records.len();
    if window == 0 || window > len {
        return Err(Error::BadWindow { window, len });
    }
    let tail = &traj.records[len - window..];
    let mean = tail.iter().map(|r| r.theta).sum::<f64>() / window as f64;
    let var = tail
        .iter()
        .map(|r| {
            let d = r.theta - mean;
            d * d
        })
        .sum::<f64>()
        / window as f64;
    Ok(sqrt(var))
}
