//! The per-algorithm step functions.
//!
//! Each function advances `state.t`, consumes the gradient elementwise, and
//! returns the updated parameters without mutating the input slice.

use alloc::vec::Vec;

use libm::{fabs, pow, sqrt};

use super::dfc::{dfc_unchecked, grad_batch_stats};
use super::{EpsPlacement, OptimizerSpec, OptimizerState, StepReport};
use crate::error::{Error, Result};

fn check_lengths(state: &OptimizerState, params: &[f64], grads: &[f64]) -> Result<()> {
    if params.len() != grads.len() {
        return Err(Error::LengthMismatch {
            what: "params/grads",
            expected: params.len(),
            actual: grads.len(),
        });
    }
    if params.len() != state.dim() {
        return Err(Error::LengthMismatch {
            what: "params/state buffers",
            expected: state.dim(),
            actual: params.len(),
        });
    }
    Ok(())
}

fn report(updated: Vec<f64>, params: &[f64], mean_dfc: f64) -> StepReport {
    let max_abs_update = updated
        .iter()
        .zip(params)
        .map(|(new, old)| fabs(new - old))
        .fold(0.0, f64::max);
    StepReport {
        updated_params: updated,
        mean_dfc,
        max_abs_update,
    }
}

/// Plain gradient descent: `θ' = θ - α g`.
pub fn sgd_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let alpha = spec.lr_at(state.t);
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .map(|(th, g)| th - alpha * g)
        .collect();
    Ok(report(updated, params, 1.0))
}

/// Momentum form `m = βm + g` (no (1-β) factor on the gradient).
pub fn sgdm_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let alpha = spec.lr_at(state.t);
    let beta = spec.momentum;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.m[i] = beta * state.m[i] + g;
            th - alpha * state.m[i]
        })
        .collect();
    Ok(report(updated, params, 1.0))
}

/// Cumulative squared-gradient normalization. `accum_g2` never decreases.
pub fn adagrad_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let alpha = spec.lr_at(state.t);
    let eps = spec.epsilon;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.accum_g2[i] += g * g;
            th - alpha * g / sqrt(state.accum_g2[i] + eps)
        })
        .collect();
    Ok(report(updated, params, 1.0))
}

/// Learning-rate-free rule built from leaky averages of squared gradients
/// and squared updates. `spec.lr` is ignored.
pub fn adadelta_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let rho = spec.rho;
    let eps = spec.epsilon;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.accum_g2[i] = rho * state.accum_g2[i] + (1.0 - rho) * g * g;
            let dx = -(sqrt(state.accum_dx2[i] + eps) / sqrt(state.accum_g2[i] + eps)) * g;
            state.accum_dx2[i] = rho * state.accum_dx2[i] + (1.0 - rho) * dx * dx;
            th + dx
        })
        .collect();
    Ok(report(updated, params, 1.0))
}

/// Leaky squared-gradient normalization with decay `spec.beta2`.
pub fn rmsprop_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let alpha = spec.lr_at(state.t);
    let beta = spec.beta2;
    let eps = spec.epsilon;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.accum_g2[i] = beta * state.accum_g2[i] + (1.0 - beta) * g * g;
            th - alpha * g / sqrt(state.accum_g2[i] + eps)
        })
        .collect();
    Ok(report(updated, params, 1.0))
}

#[inline]
fn moment_denom(vhat: f64, eps: f64, placement: EpsPlacement) -> f64 {
    match placement {
        EpsPlacement::InsideSqrt => sqrt(vhat + eps),
        EpsPlacement::OutsideSqrt => sqrt(vhat) + eps,
    }
}

/// Bias-corrected first/second moments with ε inside the root by default.
pub fn adam_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let t = state.t;
    let alpha = spec.lr_at(t);
    let (b1t, b2) = (spec.beta1_at(t), spec.beta2);
    let bc1 = 1.0 - pow(spec.beta1, t as f64);
    let bc2 = 1.0 - pow(b2, t as f64);
    let eps = spec.epsilon;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.m[i] = b1t * state.m[i] + (1.0 - b1t) * g;
            state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
            let mhat = state.m[i] / bc1;
            let vhat = state.v[i] / bc2;
            th - alpha * mhat / moment_denom(vhat, eps, spec.eps_placement)
        })
        .collect();
    Ok(report(updated, params, 1.0))
}

/// Adam moments normalized by the running max of bias-corrected second
/// moments, which never decreases.
pub fn amsgrad_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    state.t += 1;
    let t = state.t;
    let alpha = spec.lr_at(t);
    let (b1t, b2) = (spec.beta1_at(t), spec.beta2);
    let bc1 = 1.0 - pow(spec.beta1, t as f64);
    let bc2 = 1.0 - pow(b2, t as f64);
    let eps = spec.epsilon;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.m[i] = b1t * state.m[i] + (1.0 - b1t) * g;
            state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
            let mhat = state.m[i] / bc1;
            let vhat = state.v[i] / bc2;
            state.v_max[i] = state.v_max[i].max(vhat);
            th - alpha * mhat / moment_denom(state.v_max[i], eps, spec.eps_placement)
        })
        .collect();
    Ok(report(updated, params, 1.0))
}

/// Adam moments damped by the friction coefficient ξ computed from the
/// change in gradient between the previous and current step; ε sits outside
/// the root by default.
pub fn diffgrad_step(
    state: &mut OptimizerState,
    params: &[f64],
    grads: &[f64],
    spec: &OptimizerSpec,
) -> Result<StepReport> {
    check_lengths(state, params, grads)?;
    let variant = spec.dfc_variant;
    let (mu, nu) = if variant.needs_batch_stats() {
        grad_batch_stats(grads)?
    } else {
        (0.0, 0.0)
    };
    state.t += 1;
    let t = state.t;
    let alpha = spec.lr_at(t);
    let (b1t, b2) = (spec.beta1_at(t), spec.beta2);
    let bc1 = 1.0 - pow(spec.beta1, t as f64);
    let bc2 = 1.0 - pow(b2, t as f64);
    let eps = spec.epsilon;
    let mut xi_sum = 0.0;
    let updated: Vec<f64> = params
        .iter()
        .zip(grads)
        .enumerate()
        .map(|(i, (th, g))| {
            state.m[i] = b1t * state.m[i] + (1.0 - b1t) * g;
            state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
            let mhat = state.m[i] / bc1;
            let vhat = state.v[i] / bc2;
            let delta_g = state.prev_grad[i] - g;
            let xi = dfc_unchecked(variant, delta_g, mu, nu);
            xi_sum += xi;
            state.prev_grad[i] = *g;
            th - alpha * xi * mhat / moment_denom(vhat, eps, spec.eps_placement)
        })
        .collect();
    let mean_dfc = if params.is_empty() {
        1.0
    } else {
        xi_sum / params.len() as f64
    };
    Ok(report(updated, params, mean_dfc))
}
