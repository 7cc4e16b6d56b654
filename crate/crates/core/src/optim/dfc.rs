//! Friction coefficients derived from the change in gradient.
//!
//! The friction coefficient ξ multiplies the bias-corrected first moment in
//! the update rule, damping parameter motion where the gradient is not
//! changing (ξ → 0.5) and letting it through where it is (ξ → 1). The base
//! coefficient is `AbsSig(Δg)` with `Δg = g_{t-1} - g_t`; five additional
//! variants reshape the squashing function or fold in batch gradient
//! statistics.

use libm::{exp, fabs, sqrt};

use crate::error::{Error, Result};

/// Friction-coefficient variant selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfcVariant {
    /// `1 / (1 + e^{-|Δg|})`, range [0.5, 1).
    Dfc0,
    /// Signed sigmoid `1 / (1 + e^{-Δg})`, range (0, 1). Not symmetric in Δg.
    Dfc1,
    /// `9 / (1 + e^{-0.5|Δg|}) - 4`, range [0.5, 5).
    Dfc2,
    /// `1 / (1 + e^{-(ν|Δg| - μ)})` with batch statistics (μ, ν), range (0, 1).
    Dfc3,
    /// As [`DfcVariant::Dfc3`] with ν².
    Dfc4,
    /// As [`DfcVariant::Dfc3`] with √ν.
    Dfc5,
    /// Constant 1: no friction, degenerates the update to Adam.
    Unit,
}

impl DfcVariant {
    /// Whether the variant consumes batch gradient statistics (μ, ν).
    pub fn needs_batch_stats(self) -> bool {
        matches!(self, DfcVariant::Dfc3 | DfcVariant::Dfc4 | DfcVariant::Dfc5)
    }

    pub fn name(self) -> &'static str {
        match self {
            DfcVariant::Dfc0 => "dfc0",
            DfcVariant::Dfc1 => "dfc1",
            DfcVariant::Dfc2 => "dfc2",
            DfcVariant::Dfc3 => "dfc3",
            DfcVariant::Dfc4 => "dfc4",
            DfcVariant::Dfc5 => "dfc5",
            DfcVariant::Unit => "unit",
        }
    }
}

#[inline]
fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + exp(-x))
}

/// Sigmoid of the absolute value: `1 / (1 + e^{-|x|})`.
///
/// Squashes any gradient change into [0.5, 1), monotone in |x|.
pub fn abs_sig(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("abs_sig input"));
    }
    Ok(logistic(fabs(x)))
}

/// Evaluates the selected friction coefficient at a gradient change `delta_g`.
///
/// `mu` and `nu` are the mean and standard deviation of the absolute
/// gradients of the current batch; they must be supplied exactly when the
/// variant calls for them (`nu >= 0`).
pub fn dfc(variant: DfcVariant, delta_g: f64, mu: Option<f64>, nu: Option<f64>) -> Result<f64> {
    if !delta_g.is_finite() {
        return Err(Error::NonFinite("dfc gradient change"));
    }
    if variant.needs_batch_stats() {
        let (mu, nu) = match (mu, nu) {
            (Some(m), Some(n)) => (m, n),
            _ => return Err(Error::MissingBatchStats),
        };
        if !mu.is_finite() || !nu.is_finite() {
            return Err(Error::NonFinite("dfc batch statistics"));
        }
        if nu < 0.0 {
            return Err(Error::InvalidSpec("nu must be nonnegative"));
        }
        return Ok(scaled_variant(variant, delta_g, mu, nu));
    }
    if mu.is_some() || nu.is_some() {
        return Err(Error::UnexpectedBatchStats);
    }
    Ok(match variant {
        DfcVariant::Dfc0 => logistic(fabs(delta_g)),
        DfcVariant::Dfc1 => logistic(delta_g),
        DfcVariant::Dfc2 => 9.0 / (1.0 + exp(-0.5 * fabs(delta_g))) - 4.0,
        DfcVariant::Unit => 1.0,
        _ => unreachable!(),
    })
}

#[inline]
fn scaled_variant(variant: DfcVariant, delta_g: f64, mu: f64, nu: f64) -> f64 {
    let scale = match variant {
        DfcVariant::Dfc3 => nu,
        DfcVariant::Dfc4 => nu * nu,
        DfcVariant::Dfc5 => sqrt(nu),
        _ => unreachable!(),
    };
    logistic(scale * fabs(delta_g) - mu)
}

/// Infallible coefficient used inside the vectorized step once preconditions
/// have been checked for the whole gradient vector.
#[inline]
pub(crate) fn dfc_unchecked(variant: DfcVariant, delta_g: f64, mu: f64, nu: f64) -> f64 {
    match variant {
        DfcVariant::Dfc0 => logistic(fabs(delta_g)),
        DfcVariant::Dfc1 => logistic(delta_g),
        DfcVariant::Dfc2 => 9.0 / (1.0 + exp(-0.5 * fabs(delta_g))) - 4.0,
        DfcVariant::Unit => 1.0,
        _ => scaled_variant(variant, delta_g, mu, nu),
    }
}

/// Mean and population standard deviation of the absolute gradient entries.
///
/// These are the μ and ν consumed by dfc3-dfc5, computed over all
/// coordinates of the current gradient vector.
pub fn grad_batch_stats(grads: &[f64]) -> Result<(f64, f64)> {
    if grads.is_empty() {
        return Err(Error::Empty("gradient vector for batch statistics"));
    }
    let n = grads.len() as f64;
    let mu = grads.iter().map(|g| fabs(*g)).sum::<f64>() / n;
    let var = grads
        .iter()
        .map(|g| {
            let d = fabs(*g) - mu;
            d * d
        })
        .sum::<f64>()
        / n;
    Ok((mu, sqrt(var)))
}
