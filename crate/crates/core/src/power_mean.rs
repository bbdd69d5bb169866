//! Power means over the full exponent range, including the limits.
//!
//! For a finite nonzero exponent `a` the power mean of positive values is
//! `(mean(v^a))^(1/a)`; the exponent-0 case is the geometric mean, and the
//! limits -inf/+inf are the minimum and maximum. Evaluation goes through
//! logarithms so that strongly negative exponents applied to tiny values
//! (such as epsilon-substituted displacements) neither overflow nor
//! underflow along the way.

use crate::error::{Error, Result};

/// Power mean of strictly positive values.
///
/// `exponent` may be any finite real or `f64::NEG_INFINITY` /
/// `f64::INFINITY`. Results that would be subnormal are clamped to zero;
/// since a power mean of positive inputs is mathematically positive, an
/// exact `0.0` in the output signals that clamp.
pub fn power_mean(values: &[f64], exponent: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
        return Err(Error::NonPositiveValue(bad));
    }
    if exponent.is_nan() {
        return Err(Error::RiskExponentOutOfRange(exponent));
    }
    Ok(mean_of_positive(values, exponent))
}

/// Power mean over nonnegative values, extended by the zero limits:
/// a zero value forces the result to 0 whenever `exponent <= 0`, and
/// contributes `0^exponent = 0` otherwise. Callers validate signs.
pub(crate) fn power_mean_nonneg(values: &[f64], exponent: f64) -> f64 {
    debug_assert!(!values.is_empty());
    debug_assert!(values.iter().all(|v| *v >= 0.0));
    if values.contains(&0.0) {
        if exponent <= 0.0 {
            return 0.0;
        }
        if exponent == f64::INFINITY {
            return values.iter().cloned().fold(0.0, f64::max);
        }
        if exponent == 1.0 {
            return values.iter().sum::<f64>() / values.len() as f64;
        }
        let positive: Vec<f64> = values.iter().cloned().filter(|v| *v > 0.0).collect();
        if positive.is_empty() {
            return 0.0;
        }
        let n = values.len() as f64;
        let logs: Vec<f64> = positive.iter().map(|v| exponent * v.ln()).collect();
        return finish(log_sum_exp(&logs) - n.ln(), exponent);
    }
    mean_of_positive(values, exponent)
}

fn mean_of_positive(values: &[f64], exponent: f64) -> f64 {
    let n = values.len() as f64;
    if exponent == f64::NEG_INFINITY {
        return values.iter().cloned().fold(f64::INFINITY, f64::min);
    }
    if exponent == f64::INFINITY {
        return values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    }
    if exponent == 0.0 {
        let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / n;
        return clamp_subnormal(mean_log.exp());
    }
    if exponent == 1.0 {
        return values.iter().sum::<f64>() / n;
    }
    let logs: Vec<f64> = values.iter().map(|v| exponent * v.ln()).collect();
    finish(log_sum_exp(&logs) - n.ln(), exponent)
}

fn finish(log_mean: f64, exponent: f64) -> f64 {
    clamp_subnormal((log_mean / exponent).exp())
}

fn clamp_subnormal(v: f64) -> f64 {
    if v.is_subnormal() {
        0.0
    } else {
        v
    }
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|t| (t - max).exp()).sum();
    sum.ln() + max
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const R2: [f64; 5] = [3.0, 1e-8, 1e-8, 1.0, 4.0];

    #[test]
    fn arithmetic_mean_of_the_reference_vector() {
        assert_relative_eq!(power_mean(&R2, 1.0).unwrap(), 1.6, max_relative = 1e-6);
    }

    #[test]
    fn constant_sequences_are_fixed_points() {
        for a in [-f64::INFINITY, -8.0, -1.0, 0.0, 0.5, 1.0, f64::INFINITY] {
            assert_relative_eq!(power_mean(&[2.0; 5], a).unwrap(), 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn fractional_exponent_matches_direct_evaluation() {
        // Independent route: ((sum of square roots) / n)^2.
        let direct = (R2.iter().map(|v| v.sqrt()).sum::<f64>() / 5.0).powi(2);
        assert_relative_eq!(power_mean(&R2, 0.5).unwrap(), direct, max_relative = 1e-12);
        assert_relative_eq!(direct, 0.89579, epsilon = 1e-4);
    }

    #[test]
    fn negative_infinity_is_the_minimum() {
        assert_eq!(power_mean(&R2, f64::NEG_INFINITY).unwrap(), 1e-8);
        assert_eq!(power_mean(&R2, f64::INFINITY).unwrap(), 4.0);
    }

    #[test]
    fn geometric_mean_via_logs() {
        // (3 * 1e-8 * 1e-8 * 1 * 4)^(1/5)
        let direct = (12e-16_f64).powf(0.2);
        assert_relative_eq!(power_mean(&R2, 0.0).unwrap(), direct, max_relative = 1e-12);
    }

    #[test]
    fn strongly_negative_exponents_do_not_overflow() {
        // (1e-8)^(-200) overflows f64; the log-space route must not.
        let v = power_mean(&R2, -200.0).unwrap();
        assert!(v.is_finite());
        assert!((1e-8 * 0.999..=4.0).contains(&v));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            power_mean(&[], 1.0).unwrap_err(),
            Error::EmptyInput
        ));
        assert!(matches!(
            power_mean(&[1.0, 0.0], 1.0).unwrap_err(),
            Error::NonPositiveValue(_)
        ));
        assert!(matches!(
            power_mean(&[1.0, -2.0], 1.0).unwrap_err(),
            Error::NonPositiveValue(_)
        ));
        assert!(power_mean(&[1.0, 2.0], f64::NAN).is_err());
    }

    #[test]
    fn nonneg_variant_handles_zero_limits() {
        let delta = [3.0, 2.0, 2.0, 3.0, 2.0];
        assert_relative_eq!(power_mean_nonneg(&delta, 1.0), 2.4, max_relative = 1e-12);
        assert_eq!(power_mean_nonneg(&[0.0, 0.0], 4.0), 0.0);
        assert_eq!(power_mean_nonneg(&[0.0, 3.0], f64::INFINITY), 3.0);
        assert_eq!(power_mean_nonneg(&[0.0, 3.0], 0.0), 0.0);
        assert_eq!(power_mean_nonneg(&[0.0, 3.0], -1.0), 0.0);
        // theta = 4 with a zero entry: only positive entries contribute.
        let direct = ((3.0f64.powi(4)) / 2.0).powf(0.25);
        assert_relative_eq!(
            power_mean_nonneg(&[0.0, 3.0], 4.0),
            direct,
            max_relative = 1e-12
        );
    }
}
