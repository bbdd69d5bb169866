//! Disclosure-risk measures over rank displacements.
//!
//! `trace_ratio` is the qualitative screen (share of permuted records).
//! `attribute_risk` evaluates the power mean of the epsilon-substituted
//! absolute displacements at an aversion exponent `alpha <= 1`: the lower
//! the exponent, the more weight falls on the least-permuted records, down
//! to the single least-moved record at `alpha = -inf`. Higher values mean
//! more permutation and therefore more protection.

use crate::dominance::{compare_curves, DominanceVerdict, Preference};
use crate::error::{Error, Result};
use crate::exponent::{validate_exponent, ExponentGrid, MeasureKind};
use crate::permutation::{DisplacementVector, Permutation};
use crate::power_mean::{power_mean, power_mean_nonneg};

/// Share of records moved by the permutation: `1 - trace/n`. Zero for the
/// identity (no protection), one when no record stays in place.
pub fn trace_ratio(perm: &Permutation) -> f64 {
    // Evaluated as moved/n: algebraically identical and exact for the
    // round fractions the measure is quoted at (1 - 1/5 != 4/5 in floats).
    (perm.len() - perm.fixed_points()) as f64 / perm.len() as f64
}

/// Quantitative disclosure risk of one attribute at aversion `alpha`.
///
/// With `normalize` the value is divided by `n - 1` (the largest possible
/// displacement), scaling it into `[0, 1]`.
pub fn attribute_risk(
    d: &DisplacementVector,
    alpha: f64,
    epsilon: f64,
    normalize: bool,
) -> Result<f64> {
    validate_exponent(MeasureKind::Risk, alpha)?;
    let values = d.epsilonized(epsilon)?;
    let mean = power_mean(&values, alpha)?;
    scaled(mean, d.n(), normalize)
}

/// Average permutation distance discounted by the share of non-permuted
/// records: `trace_ratio * attribute_risk(alpha = 1)`.
pub fn combined_risk(perm: &Permutation, d: &DisplacementVector, epsilon: f64) -> Result<f64> {
    Ok(trace_ratio(perm) * attribute_risk(d, 1.0, epsilon, false)?)
}

/// Dataset-level disclosure risk: an outer power mean with exponent `beta`
/// over the per-attribute measures at `alpha`. As `beta` falls toward
/// `-inf` the verdict concentrates on the least-protected attribute.
pub fn dataset_risk(
    displacements: &[DisplacementVector],
    alpha: f64,
    beta: f64,
    epsilon: f64,
    normalize: bool,
) -> Result<f64> {
    if displacements.is_empty() {
        return Err(Error::EmptyInput);
    }
    validate_exponent(MeasureKind::Risk, beta)?;
    let inner: Vec<f64> = displacements
        .iter()
        .map(|d| attribute_risk(d, alpha, epsilon, normalize))
        .collect::<Result<_>>()?;
    // An exact zero can only come from an underflow clamp; the zero limit
    // of the outer mean is 0 whenever beta <= 0.
    Ok(power_mean_nonneg(&inner, beta))
}

/// `attribute_risk` evaluated at every grid point, limit endpoint included.
pub fn risk_curve(
    d: &DisplacementVector,
    grid: &ExponentGrid,
    epsilon: f64,
    normalize: bool,
) -> Result<Vec<(f64, f64)>> {
    require_risk_grid(grid)?;
    grid.exponents()
        .into_iter()
        .map(|alpha| Ok((alpha, attribute_risk(d, alpha, epsilon, normalize)?)))
        .collect()
}

/// Weak risk dominance of method A over method B on a grid: A dominates
/// when its measure is at least B's (within `tolerance`) at every point,
/// i.e. A permutes at least as much under every aversion level.
pub fn risk_dominance(
    d_a: &DisplacementVector,
    d_b: &DisplacementVector,
    grid: &ExponentGrid,
    epsilon: f64,
    tolerance: f64,
) -> Result<DominanceVerdict> {
    require_risk_grid(grid)?;
    if d_a.n() != d_b.n() {
        return Err(Error::LengthMismatch {
            a: d_a.n(),
            b: d_b.n(),
        });
    }
    let curve = |d: &DisplacementVector| -> Result<Vec<f64>> {
        grid.exponents()
            .into_iter()
            .map(|alpha| attribute_risk(d, alpha, epsilon, false))
            .collect()
    };
    let a = curve(d_a)?;
    let b = curve(d_b)?;
    compare_curves(grid, &a, &b, Preference::HigherIsBetter, tolerance)
}

fn require_risk_grid(grid: &ExponentGrid) -> Result<()> {
    match grid.kind() {
        MeasureKind::Risk => Ok(()),
        MeasureKind::InfoLoss => Err(Error::RiskExponentOutOfRange(
            grid.finite_values()
                .last()
                .copied()
                .unwrap_or(f64::INFINITY),
        )),
    }
}

fn scaled(value: f64, n: usize, normalize: bool) -> Result<f64> {
    if !normalize {
        return Ok(value);
    }
    if n < 2 {
        return Err(Error::NormalizeTooFew(n));
    }
    Ok(value / (n - 1) as f64)
}
