//! Online-learning regret and the analytic regret bound.
//!
//! Regret compares the sequence of online iterates against the best fixed
//! parameter in hindsight, `θ* = argmin_θ Σ_t f_t(θ)`, searched over an
//! explicit evaluation grid. The bound is the three-term guarantee that holds
//! for diffGrad under the decaying schedules `α_t = α/√t` and
//! `β_{1,t} = β₁λ^{t-1}`; its constants D, D∞ and G∞ are measured post hoc
//! from the realized trajectory, and the bound is only evaluated when the
//! iterates stayed inside the feasible grid.

use alloc::vec;
use alloc::vec::Vec;

use libm::{exp, fabs, pow, sqrt};

use super::l2_norm;
use crate::error::{Error, Result};
use crate::objective::{make_quadratic, Objective, Quadratic};
use crate::optim::{step, OptimizerSpec, OptimizerState};
use crate::rng::SplitMix64;

/// Regret series of one online run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretReport {
    /// Cumulative regret R(t) for t = 1..=T.
    pub regret_per_t: Vec<f64>,
    /// Best fixed point in hindsight over the feasible grid.
    pub theta_star: Vec<f64>,
    /// (T, R(T)/T) samples at canonical checkpoints plus the final T.
    pub avg_regret_samples: Vec<(usize, f64)>,
    /// Analytic bound value when the decay schedule was active and the
    /// iterates stayed inside the grid; None otherwise.
    pub bound_value: Option<f64>,
}

impl RegretReport {
    pub fn total_regret(&self) -> f64 {
        *self.regret_per_t.last().unwrap_or(&0.0)
    }

    pub fn average_regret_at(&self, t: usize) -> Option<f64> {
        if t == 0 || t > self.regret_per_t.len() {
            return None;
        }
        Some(self.regret_per_t[t - 1] / t as f64)
    }
}

fn checkpoints(total: usize) -> Vec<usize> {
    let ladder = [
        10, 20, 50, 100, 200, 500, 1_000, 2_000, 5_000, 10_000, 20_000, 50_000, 100_000,
    ];
    let mut out: Vec<usize> = ladder.iter().copied().filter(|t| *t < total).collect();
    out.push(total);
    out
}

/// Regret of `iterates` against the grid-optimal fixed point for the given
/// loss sequence. `iterates[t]` must be the parameter vector at which `f_t`
/// was evaluated (before the t-th update).
pub fn compute_regret<O: Objective>(
    objectives: &[O],
    iterates: &[Vec<f64>],
    feasible_grid: &[Vec<f64>],
) -> Result<RegretReport> {
    if objectives.len() != iterates.len() {
        return Err(Error::LengthMismatch {
            what: "objectives/iterates",
            expected: objectives.len(),
            actual: iterates.len(),
        });
    }
    if feasible_grid.is_empty() {
        return Err(Error::Empty("feasible grid"));
    }
    let mut best_idx = 0;
    let mut best_total = f64::INFINITY;
    for (i, candidate) in feasible_grid.iter().enumerate() {
        let total: f64 = objectives.iter().map(|f| f.value(candidate)).sum();
        if total < best_total {
            best_total = total;
            best_idx = i;
        }
    }
    let theta_star = feasible_grid[best_idx].clone();

    let mut cumulative = 0.0;
    let regret_per_t: Vec<f64> = objectives
        .iter()
        .zip(iterates)
        .map(|(f, theta)| {
            cumulative += f.value(theta) - f.value(&theta_star);
            cumulative
        })
        .collect();

    let avg_regret_samples = checkpoints(regret_per_t.len())
        .into_iter()
        .map(|t| (t, regret_per_t[t - 1] / t as f64))
        .collect();

    Ok(RegretReport {
        regret_per_t,
        theta_star,
        avg_regret_samples,
        bound_value: None,
    })
}

/// Everything the regret bound consumes, measured from a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    /// L2 diameter of the visited iterates.
    pub diameter_l2: f64,
    /// L-infinity diameter of the visited iterates.
    pub diameter_inf: f64,
    /// Largest absolute gradient coordinate seen.
    pub grad_inf: f64,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub lambda: f64,
    /// Gradient history per dimension: `grad_history[i][t-1]` = g_{t,i}.
    pub grad_history: Vec<Vec<f64>>,
    /// Bias-corrected second moment after the final step.
    pub vhat_final: Vec<f64>,
    /// First-step gradient g_1.
    pub first_grad: Vec<f64>,
}

impl BoundInputs {
    /// Measures the tightest valid constants from a realized run.
    ///
    /// `iterates` are the pre-update parameter vectors, `grads[t-1]` the
    /// gradient consumed by step t, and `final_v` the optimizer's raw second
    /// moment after step T. Requires the β₁-decay schedule to be active.
    pub fn measure(
        iterates: &[Vec<f64>],
        grads: &[Vec<f64>],
        final_v: &[f64],
        spec: &OptimizerSpec,
    ) -> Result<BoundInputs> {
        let lambda = spec
            .beta1_decay_lambda
            .ok_or(Error::Precondition("bound requires the beta1 decay schedule"))?;
        if grads.is_empty() || iterates.is_empty() {
            return Err(Error::Empty("trajectory for bound measurement"));
        }
        if grads.len() != iterates.len() {
            return Err(Error::LengthMismatch {
                what: "iterates/grads",
                expected: iterates.len(),
                actual: grads.len(),
            });
        }
        let dim = final_v.len();
        let steps = grads.len();

        // Coordinate ranges give the exact L-inf diameter and an upper bound
        // for the L2 diameter (exact in one dimension).
        let mut lo = iterates[0].clone();
        let mut hi = iterates[0].clone();
        for theta in iterates {
            for i in 0..dim {
                lo[i] = lo[i].min(theta[i]);
                hi[i] = hi[i].max(theta[i]);
            }
        }
        let diameter_inf = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| b - a)
            .fold(0.0, f64::max);
        let diameter_l2 = l2_norm(
            &lo.iter()
                .zip(&hi)
                .map(|(a, b)| b - a)
                .collect::<Vec<f64>>(),
        );

        let mut grad_history = vec![Vec::with_capacity(steps); dim];
        let mut grad_inf: f64 = 0.0;
        for g in grads {
            for (i, gi) in g.iter().enumerate() {
                grad_history[i].push(*gi);
                grad_inf = grad_inf.max(fabs(*gi));
            }
        }
        let bc2 = 1.0 - pow(spec.beta2, steps as f64);
        let vhat_final = final_v.iter().map(|v| v / bc2).collect();

        Ok(BoundInputs {
            diameter_l2,
            diameter_inf,
            grad_inf,
            alpha: spec.lr,
            beta1: spec.beta1,
            beta2: spec.beta2,
            lambda,
            grad_history,
            vhat_final,
            first_grad: grads[0].clone(),
        })
    }
}

/// Evaluates the three-term regret guarantee.
///
/// Requires γ = β₁²/√β₂ < 1 and λ ∈ (0, 1).
pub fn regret_bound(inputs: &BoundInputs) -> Result<f64> {
    let BoundInputs {
        diameter_l2: d2,
        diameter_inf: dinf,
        grad_inf: ginf,
        alpha,
        beta1,
        beta2,
        lambda,
        ..
    } = *inputs;
    if !(0.0..1.0).contains(&beta1) || !(0.0..1.0).contains(&beta2) {
        return Err(Error::Precondition("beta1 and beta2 must lie in [0, 1)"));
    }
    let gamma = beta1 * beta1 / sqrt(beta2);
    if gamma >= 1.0 {
        return Err(Error::Precondition("gamma = beta1^2 / sqrt(beta2) must be below 1"));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Precondition("lambda must lie in (0, 1)"));
    }
    if alpha <= 0.0 {
        return Err(Error::Precondition("alpha must be positive"));
    }
    let dim = inputs.grad_history.len();
    if dim == 0 || inputs.vhat_final.len() != dim || inputs.first_grad.len() != dim {
        return Err(Error::LengthMismatch {
            what: "bound input dimensions",
            expected: dim,
            actual: inputs.vhat_final.len(),
        });
    }
    let steps = inputs.grad_history[0].len() as f64;

    let mut term1_sum = 0.0;
    let mut term2_sum = 0.0;
    for i in 0..dim {
        term1_sum += (1.0 + exp(-fabs(inputs.first_grad[i])))
            * sqrt(steps * inputs.vhat_final[i]);
        term2_sum += l2_norm(&inputs.grad_history[i]);
    }
    let term1 = d2 * d2 / (2.0 * alpha * (1.0 - beta1)) * term1_sum;
    let term2 = alpha * (1.0 + beta1) * ginf
        / ((1.0 - beta1) * sqrt(1.0 - beta2) * (1.0 - gamma) * (1.0 - gamma))
        * term2_sum;
    let term3 = dim as f64 * dinf * dinf * ginf * sqrt(1.0 - beta2)
        / (2.0 * alpha * (1.0 - beta1) * (1.0 - lambda) * (1.0 - lambda));
    Ok(term1 + term2 + term3)
}

/// Configuration of the stochastic convex quadratic sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretConfig {
    pub iters: usize,
    pub seed: u64,
    pub spec: OptimizerSpec,
    pub theta0: f64,
    /// Quadratic centers are drawn uniformly from this interval.
    pub center_low: f64,
    pub center_high: f64,
    pub scale: f64,
    /// Evaluation grid for the hindsight optimum.
    pub grid_low: f64,
    pub grid_high: f64,
    pub grid_step: f64,
}

impl Default for RegretConfig {
    fn default() -> Self {
        Self {
            iters: 2000,
            seed: 42,
            spec: super::regret_defaults(),
            theta0: -1.0,
            center_low: -0.5,
            center_high: 0.5,
            scale: 1.0,
            grid_low: -2.0,
            grid_high: 2.0,
            grid_step: 1e-4,
        }
    }
}

/// Result of [`run_regret_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegretOutcome {
    pub report: RegretReport,
    /// Whether every iterate stayed inside the feasible grid interval.
    pub iterates_bounded: bool,
    /// Measured bound inputs when the bound was evaluated.
    pub bound_inputs: Option<BoundInputs>,
}

/// Runs the optimizer over a seeded sequence of 1-D quadratics and reports
/// regret against the grid-optimal fixed point.
pub fn run_regret_experiment(config: &RegretConfig) -> Result<RegretOutcome> {
    config.spec.validate()?;
    if config.iters == 0 {
        return Err(Error::Precondition("iteration count must be at least 1"));
    }
    let grid_step_ok = config.grid_step.is_finite() && config.grid_step > 0.0;
    if !grid_step_ok || config.grid_low >= config.grid_high {
        return Err(Error::Precondition("grid interval must be nonempty with positive step"));
    }
    if !(config.scale.is_finite() && config.scale > 0.0) {
        return Err(Error::Precondition("quadratic scale must be positive"));
    }
    if config.spec.beta1_decay_lambda.is_some() {
        // Check the bound's hyperparameter precondition up front so a bad
        // configuration fails before the run rather than after it.
        let gamma = config.spec.beta1 * config.spec.beta1 / sqrt(config.spec.beta2);
        if gamma >= 1.0 {
            return Err(Error::Precondition("gamma = beta1^2 / sqrt(beta2) must be below 1"));
        }
    }

    let mut rng = SplitMix64::new(config.seed);
    let objectives: Vec<Quadratic> = (0..config.iters)
        .map(|_| {
            make_quadratic(
                vec![rng.next_range(config.center_low, config.center_high)],
                config.scale,
            )
        })
        .collect();

    let mut state = OptimizerState::new(1);
    let mut theta = vec![config.theta0];
    let mut iterates = Vec::with_capacity(config.iters);
    let mut grads = Vec::with_capacity(config.iters);
    for objective in &objectives {
        let (_, grad) = objective.eval(&theta);
        iterates.push(theta.clone());
        let report = step(&mut state, &theta, &grad, &config.spec)?;
        grads.push(grad);
        theta = report.updated_params;
    }

    let grid_points = libm::round((config.grid_high - config.grid_low) / config.grid_step) as usize;
    let grid: Vec<Vec<f64>> = (0..=grid_points)
        .map(|i| vec![config.grid_low + i as f64 * config.grid_step])
        .collect();

    let mut report = compute_regret(&objectives, &iterates, &grid)?;

    let iterates_bounded = iterates
        .iter()
        .all(|th| th[0] >= config.grid_low && th[0] <= config.grid_high);

    let mut bound_inputs = None;
    if config.spec.beta1_decay_lambda.is_some() && iterates_bounded {
        let inputs = BoundInputs::measure(&iterates, &grads, &state.v, &config.spec)?;
        report.bound_value = Some(regret_bound(&inputs)?);
        bound_inputs = Some(inputs);
    }

    Ok(RegretOutcome {
        report,
        iterates_bounded,
        bound_inputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::Algorithm;

    #[test]
    fn zero_regret_when_iterates_sit_at_optimum() {
        let objectives: Vec<Quadratic> =
            (0..5).map(|_| make_quadratic(vec![1.0], 1.0)).collect();
        let iterates = vec![vec![1.0]; 5];
        let grid: Vec<Vec<f64>> = (0..=40).map(|i| vec![-1.0 + i as f64 * 0.1]).collect();
        let report = compute_regret(&objectives, &iterates, &grid).unwrap();
        assert!(report.total_regret().abs() < 1e-12);
        assert_eq!(report.theta_star, vec![1.0]);
    }

    #[test]
    fn fixed_quadratic_regret_counts_per_step_gap() {
        // f_t(θ) = (θ-1)², θ_t = 0, grid containing 1: R(3) = 3.
        let objectives: Vec<Quadratic> =
            (0..3).map(|_| make_quadratic(vec![1.0], 1.0)).collect();
        let iterates = vec![vec![0.0]; 3];
        let grid = vec![vec![0.0], vec![0.5], vec![1.0]];
        let report = compute_regret(&objectives, &iterates, &grid).unwrap();
        assert_eq!(report.regret_per_t, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let objectives = vec![make_quadratic(vec![0.0], 1.0)];
        let iterates = vec![vec![0.0], vec![0.0]];
        let grid = vec![vec![0.0]];
        assert!(compute_regret(&objectives, &iterates, &grid).is_err());
        assert!(compute_regret(&objectives, &iterates[..1], &[]).is_err());
    }

    #[test]
    fn bound_reduces_term_by_term_for_zero_gradients() {
        // With all gradients zero the second term vanishes and the first
        // term's factor (1 + e^0) = 2.
        let inputs = BoundInputs {
            diameter_l2: 1.0,
            diameter_inf: 1.0,
            grad_inf: 0.0,
            alpha: 0.1,
            beta1: 0.9,
            beta2: 0.999,
            lambda: 0.5,
            grad_history: vec![vec![0.0; 4]],
            vhat_final: vec![0.25],
            first_grad: vec![0.0],
        };
        let bound = regret_bound(&inputs).unwrap();
        let term1 = 1.0 / (2.0 * 0.1 * 0.1) * 2.0 * sqrt(4.0 * 0.25);
        let term3 = 1.0 * 0.0; // grad_inf = 0 kills the third term too
        assert!((bound - (term1 + term3)).abs() < 1e-9);
    }

    #[test]
    fn bound_matches_independent_hand_evaluation() {
        // d = 1, T = 2 with simple numbers; expected value computed with an
        // independent spreadsheet-style evaluation of the three terms.
        let inputs = BoundInputs {
            diameter_l2: 2.0,
            diameter_inf: 2.0,
            grad_inf: 3.0,
            alpha: 0.5,
            beta1: 0.5,
            beta2: 0.25,
            lambda: 0.5,
            grad_history: vec![vec![3.0, 4.0]],
            vhat_final: vec![9.0],
            first_grad: vec![1.0],
        };
        // gamma = 0.25 / 0.5 = 0.5
        let term1 = 4.0 / (2.0 * 0.5 * 0.5) * (1.0 + exp(-1.0)) * sqrt(2.0 * 9.0);
        let term2 = 0.5 * 1.5 * 3.0 / (0.5 * sqrt(0.75) * 0.25) * 5.0;
        let term3 = 4.0 * 3.0 * sqrt(0.75) / (2.0 * 0.5 * 0.5 * 0.25);
        let expected = term1 + term2 + term3;
        let bound = regret_bound(&inputs).unwrap();
        assert!((bound - expected).abs() < 1e-12 * expected);
        assert!(bound > 0.0);
    }

    #[test]
    fn bound_rejects_gamma_at_or_above_one() {
        let mut inputs = BoundInputs {
            diameter_l2: 1.0,
            diameter_inf: 1.0,
            grad_inf: 1.0,
            alpha: 0.1,
            beta1: 0.99,
            beta2: 0.9,
            lambda: 0.5,
            grad_history: vec![vec![1.0]],
            vhat_final: vec![1.0],
            first_grad: vec![1.0],
        };
        assert!(matches!(regret_bound(&inputs), Err(Error::Precondition(_))));
        inputs.beta1 = 0.5;
        inputs.lambda = 1.0;
        assert!(matches!(regret_bound(&inputs), Err(Error::Precondition(_))));
    }

    #[test]
    fn regret_experiment_is_deterministic_and_nonnegative() {
        let config = RegretConfig {
            iters: 300,
            ..RegretConfig::default()
        };
        let a = run_regret_experiment(&config).unwrap();
        let b = run_regret_experiment(&config).unwrap();
        assert_eq!(a, b);
        assert!(a.report.regret_per_t.iter().all(|r| *r >= 0.0));
        assert!(a.iterates_bounded);
        assert!(a.report.bound_value.is_some());
        assert!(a.report.total_regret() <= a.report.bound_value.unwrap());
    }

    #[test]
    fn regret_experiment_rejects_gamma_at_or_above_one() {
        let mut config = RegretConfig::default();
        config.spec = config.spec.with_betas(0.999, 0.9);
        assert!(matches!(
            run_regret_experiment(&config),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bound_skipped_without_decay_schedule() {
        let mut config = RegretConfig {
            iters: 50,
            ..RegretConfig::default()
        };
        config.spec.beta1_decay_lambda = None;
        config.spec = config.spec.with_lr_schedule(crate::optim::LrSchedule::Constant);
        let outcome = run_regret_experiment(&config).unwrap();
        assert!(outcome.report.bound_value.is_none());
        assert!(outcome.bound_inputs.is_none());
    }

    #[test]
    fn any_algorithm_can_run_the_online_sequence() {
        let config = RegretConfig {
            iters: 100,
            spec: OptimizerSpec::new(Algorithm::Adam).with_lr(0.1),
            ..RegretConfig::default()
        };
        let outcome = run_regret_experiment(&config).unwrap();
        assert_eq!(outcome.report.regret_per_t.len(), 100);
        assert!(outcome.report.bound_value.is_none());
    }
}
