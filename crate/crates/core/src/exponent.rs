//! Aversion-exponent grids.
//!
//! Risk measures accept exponents in `[-inf, 1]`, information-loss
//! measures in `[1, +inf]`. A grid is a finite ascending list of legal
//! finite exponents plus an optional analytic limit endpoint (-inf for
//! risk, +inf for information loss).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which measure a grid parameterizes, fixing its legal exponent range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Disclosure risk: exponents <= 1, limit endpoint -inf.
    Risk,
    /// Information loss: exponents >= 1, limit endpoint +inf.
    InfoLoss,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentGrid {
    kind: MeasureKind,
    values: Vec<f64>,
    include_limit: bool,
}

impl ExponentGrid {
    /// Risk grid from finite exponents `<= 1`. Values are sorted and
    /// deduplicated; the -inf endpoint is off until [`with_limit`].
    ///
    /// [`with_limit`]: ExponentGrid::with_limit
    pub fn risk(values: Vec<f64>) -> Result<Self> {
        Self::build(MeasureKind::Risk, values)
    }

    /// Information-loss grid from finite exponents `>= 1`.
    pub fn info(values: Vec<f64>) -> Result<Self> {
        Self::build(MeasureKind::InfoLoss, values)
    }

    fn build(kind: MeasureKind, mut values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            validate_exponent(kind, v)?;
            if !v.is_finite() {
                // Limits enter through with_limit, not the value list.
                return Err(match kind {
                    MeasureKind::Risk => Error::RiskExponentOutOfRange(v),
                    MeasureKind::InfoLoss => Error::InfoExponentOutOfRange(v),
                });
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite exponents"));
        values.dedup();
        if values.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(Self {
            kind,
            values,
            include_limit: false,
        })
    }

    /// Include the analytic limit endpoint (-inf or +inf by kind).
    pub fn with_limit(mut self) -> Self {
        self.include_limit = true;
        self
    }

    /// Default risk grid: {-8, -4, -2, -1, -0.5, 0, 0.5, 1} plus -inf.
    pub fn default_risk() -> Self {
        Self::risk(vec![-8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0])
            .expect("static grid is legal")
            .with_limit()
    }

    /// Default information-loss grid: {1, 1.5, 2, 3, 4, 8} plus +inf.
    pub fn default_info() -> Self {
        Self::info(vec![1.0, 1.5, 2.0, 3.0, 4.0, 8.0])
            .expect("static grid is legal")
            .with_limit()
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn finite_values(&self) -> &[f64] {
        &self.values
    }

    pub fn includes_limit(&self) -> bool {
        self.include_limit
    }

    /// All grid points in ascending order, limit endpoint included.
    pub fn exponents(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.values.len() + 1);
        if self.include_limit && self.kind == MeasureKind::Risk {
            out.push(f64::NEG_INFINITY);
        }
        out.extend_from_slice(&self.values);
        if self.include_limit && self.kind == MeasureKind::InfoLoss {
            out.push(f64::INFINITY);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.values.len() + usize::from(self.include_limit)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points rendered with -inf/+inf literals.
    pub fn labels(&self) -> Vec<String> {
        self.exponents()
            .iter()
            .map(|&e| format_exponent(e))
            .collect()
    }
}

/// Check one exponent against a measure's legal range.
pub fn validate_exponent(kind: MeasureKind, value: f64) -> Result<f64> {
    match kind {
        MeasureKind::Risk => {
            if value.is_nan() || value > 1.0 || value == f64::INFINITY {
                Err(Error::RiskExponentOutOfRange(value))
            } else {
                Ok(value)
            }
        }
        MeasureKind::InfoLoss => {
            if value.is_nan() || value < 1.0 {
                Err(Error::InfoExponentOutOfRange(value))
            } else {
                Ok(value)
            }
        }
    }
}

/// `-inf` / `+inf` literals for the limits, shortest decimal otherwise.
pub fn format_exponent(e: f64) -> String {
    if e == f64::NEG_INFINITY {
        "-inf".into()
    } else if e == f64::INFINITY {
        "+inf".into()
    } else {
        format!("{e}")
    }
}

/// Inverse of [`format_exponent`]; also accepts `inf`.
pub fn parse_exponent(s: &str) -> Option<f64> {
    match s.trim() {
        "-inf" => Some(f64::NEG_INFINITY),
        "+inf" | "inf" => Some(f64::INFINITY),
        other => other.parse().ok().filter(|v: &f64| !v.is_nan()),
    }
}
