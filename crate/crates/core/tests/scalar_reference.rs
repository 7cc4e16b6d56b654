//! Oracle equivalence: every vectorized step engine is checked coordinate by
//! coordinate against an independently written scalar implementation of the
//! same update rule, over long randomized step sequences.
//!
//! The reference below deliberately shares no code with the library: it keeps
//! one scalar state per coordinate and spells out each rule directly.

use optbench_core::optim::{
    step, Algorithm, DfcVariant, EpsPlacement, LrSchedule, OptimizerSpec, OptimizerState,
};
use optbench_core::rng::SplitMix64;

const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Default)]
struct ScalarState {
    m: f64,
    v: f64,
    vmax: f64,
    g2: f64,
    dx2: f64,
    prev_g: f64,
}

struct ScalarParams {
    lr: f64,
    beta1: f64,
    beta2: f64,
    momentum: f64,
    rho: f64,
    eps: f64,
    eps_inside: bool,
    sqrt_lr_decay: bool,
    lambda: Option<f64>,
    variant: DfcVariant,
}

impl ScalarParams {
    fn from_spec(spec: &OptimizerSpec) -> Self {
        Self {
            lr: spec.lr,
            beta1: spec.beta1,
            beta2: spec.beta2,
            momentum: spec.momentum,
            rho: spec.rho,
            eps: spec.epsilon,
            eps_inside: spec.eps_placement == EpsPlacement::InsideSqrt,
            sqrt_lr_decay: spec.lr_schedule == LrSchedule::InvSqrtT,
            lambda: spec.beta1_decay_lambda,
            variant: spec.dfc_variant,
        }
    }

    fn alpha(&self, t: u64) -> f64 {
        if self.sqrt_lr_decay {
            self.lr / (t as f64).sqrt()
        } else {
            self.lr
        }
    }

    fn beta1_t(&self, t: u64) -> f64 {
        match self.lambda {
            Some(l) => self.beta1 * l.powi(t as i32 - 1),
            None => self.beta1,
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn scalar_dfc(variant: DfcVariant, dg: f64, mu: f64, nu: f64) -> f64 {
    match variant {
        DfcVariant::Dfc0 => sigmoid(dg.abs()),
        DfcVariant::Dfc1 => sigmoid(dg),
        DfcVariant::Dfc2 => 9.0 / (1.0 + (-0.5 * dg.abs()).exp()) - 4.0,
        DfcVariant::Dfc3 => sigmoid(nu * dg.abs() - mu),
        DfcVariant::Dfc4 => sigmoid(nu * nu * dg.abs() - mu),
        DfcVariant::Dfc5 => sigmoid(nu.sqrt() * dg.abs() - mu),
        DfcVariant::Unit => 1.0,
    }
}

/// One coordinate of one step; `t` is 1-based, `(mu, nu)` only matter for
/// the statistics-based diffgrad variants.
#[allow(clippy::too_many_arguments)]
fn scalar_step(
    alg: Algorithm,
    p: &ScalarParams,
    st: &mut ScalarState,
    t: u64,
    theta: f64,
    g: f64,
    mu: f64,
    nu: f64,
) -> f64 {
    let a = p.alpha(t);
    match alg {
        Algorithm::Sgd => theta - a * g,
        Algorithm::Sgdm => {
            st.m = p.momentum * st.m + g;
            theta - a * st.m
        }
        Algorithm::Adagrad => {
            st.g2 += g * g;
            theta - a * g / (st.g2 + p.eps).sqrt()
        }
        Algorithm::Adadelta => {
            st.g2 = p.rho * st.g2 + (1.0 - p.rho) * g * g;
            let dx = -((st.dx2 + p.eps).sqrt() / (st.g2 + p.eps).sqrt()) * g;
            st.dx2 = p.rho * st.dx2 + (1.0 - p.rho) * dx * dx;
            theta + dx
        }
        Algorithm::Rmsprop => {
            st.g2 = p.beta2 * st.g2 + (1.0 - p.beta2) * g * g;
            theta - a * g / (st.g2 + p.eps).sqrt()
        }
        Algorithm::Adam | Algorithm::Amsgrad | Algorithm::Diffgrad => {
            let b1t = p.beta1_t(t);
            st.m = b1t * st.m + (1.0 - b1t) * g;
            st.v = p.beta2 * st.v + (1.0 - p.beta2) * g * g;
            let mhat = st.m / (1.0 - p.beta1.powi(t as i32));
            let vhat = st.v / (1.0 - p.beta2.powi(t as i32));
            let denom_of = |x: f64| {
                if p.eps_inside {
                    (x + p.eps).sqrt()
                } else {
                    x.sqrt() + p.eps
                }
            };
            match alg {
                Algorithm::Adam => theta - a * mhat / denom_of(vhat),
                Algorithm::Amsgrad => {
                    st.vmax = st.vmax.max(vhat);
                    theta - a * mhat / denom_of(st.vmax)
                }
                Algorithm::Diffgrad => {
                    let xi = scalar_dfc(p.variant, st.prev_g - g, mu, nu);
                    st.prev_g = g;
                    theta - a * xi * mhat / denom_of(vhat)
                }
                _ => unreachable!(),
            }
        }
    }
}

fn scalar_batch_stats(grads: &[f64]) -> (f64, f64) {
    let n = grads.len() as f64;
    let mu = grads.iter().map(|g| g.abs()).sum::<f64>() / n;
    let var = grads
        .iter()
        .map(|g| (g.abs() - mu) * (g.abs() - mu))
        .sum::<f64>()
        / n;
    (mu, var.sqrt())
}

/// Runs the vectorized engine and the scalar reference side by side and
/// returns the largest per-coordinate divergence seen.
fn max_divergence(spec: &OptimizerSpec, dim: usize, steps: usize, seed: u64) -> f64 {
    let mut rng = SplitMix64::new(seed);
    let mut state = OptimizerState::new(dim);
    let mut params: Vec<f64> = (0..dim).map(|_| rng.next_range(-1.0, 1.0)).collect();
    let mut ref_params = params.clone();
    let mut ref_states = vec![ScalarState::default(); dim];
    let scalar = ScalarParams::from_spec(spec);
    let mut worst: f64 = 0.0;
    for t in 1..=steps as u64 {
        let grads: Vec<f64> = (0..dim).map(|_| rng.next_range(-3.0, 3.0)).collect();
        let report = step(&mut state, &params, &grads, spec).unwrap();
        params = report.updated_params;
        let (mu, nu) = if spec.dfc_variant.needs_batch_stats() {
            scalar_batch_stats(&grads)
        } else {
            (0.0, 0.0)
        };
        for i in 0..dim {
            ref_params[i] = scalar_step(
                spec.algorithm,
                &scalar,
                &mut ref_states[i],
                t,
                ref_params[i],
                grads[i],
                mu,
                nu,
            );
            worst = worst.max((ref_params[i] - params[i]).abs());
        }
    }
    worst
}

#[test]
fn sgd_thousand_dim_single_step_is_exact() {
    let spec = OptimizerSpec::new(Algorithm::Sgd);
    let divergence = max_divergence(&spec, 1000, 1, 0xBEEF);
    assert!(divergence <= 1e-15, "sgd divergence {divergence}");
}

#[test]
fn every_algorithm_matches_the_scalar_reference() {
    for (k, algorithm) in Algorithm::ALL.into_iter().enumerate() {
        let spec = OptimizerSpec::new(algorithm);
        let divergence = max_divergence(&spec, 7, 1000, 0xACE0 + k as u64);
        assert!(
            divergence <= TOL,
            "{}: divergence {divergence}",
            algorithm.name()
        );
    }
}

#[test]
fn benchmark_protocol_rates_match_too() {
    // The synthetic-protocol hyperparameters stress larger beta1.
    for algorithm in [Algorithm::Adam, Algorithm::Amsgrad, Algorithm::Diffgrad] {
        let spec = OptimizerSpec::new(algorithm)
            .with_lr(0.1)
            .with_betas(0.95, 0.999);
        let divergence = max_divergence(&spec, 5, 1000, 0x5EED);
        assert!(divergence <= TOL, "{}: {divergence}", algorithm.name());
    }
}

#[test]
fn every_dfc_variant_matches() {
    for (k, variant) in DfcVariant::ALL.into_iter().enumerate() {
        let spec = OptimizerSpec::new(Algorithm::Diffgrad).with_dfc_variant(variant);
        let divergence = max_divergence(&spec, 6, 1000, 0xD1CE + k as u64);
        assert!(divergence <= TOL, "{}: {divergence}", variant.name());
    }
}

#[test]
fn decay_schedules_match() {
    // The regret-analysis configuration: alpha/sqrt(t) with beta1 decay.
    let spec = OptimizerSpec::new(Algorithm::Diffgrad)
        .with_lr(0.1)
        .with_betas(0.95, 0.999)
        .with_lr_schedule(LrSchedule::InvSqrtT)
        .with_beta1_decay(1.0 - 1e-8);
    let divergence = max_divergence(&spec, 4, 1000, 0xFADE);
    assert!(divergence <= TOL, "decayed diffgrad: {divergence}");

    let adam = OptimizerSpec::new(Algorithm::Adam)
        .with_lr_schedule(LrSchedule::InvSqrtT)
        .with_beta1_decay(0.999_999);
    let divergence = max_divergence(&adam, 4, 1000, 0xFEED);
    assert!(divergence <= TOL, "decayed adam: {divergence}");
}

#[test]
fn eps_placement_override_matches() {
    let outside_adam = OptimizerSpec::new(Algorithm::Adam)
        .with_eps_placement(EpsPlacement::OutsideSqrt);
    let divergence = max_divergence(&outside_adam, 5, 500, 0x0DD);
    assert!(divergence <= TOL, "adam outside-sqrt: {divergence}");

    let inside_diff = OptimizerSpec::new(Algorithm::Diffgrad)
        .with_eps_placement(EpsPlacement::InsideSqrt);
    let divergence = max_divergence(&inside_diff, 5, 500, 0x1DD);
    assert!(divergence <= TOL, "diffgrad inside-sqrt: {divergence}");
}
