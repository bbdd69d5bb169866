//! Information-loss measures over relative rank displacements.
//!
//! Reverse mapping preserves every marginal exactly, so information can
//! only be lost through the dependency between attributes. The relative
//! displacement of an attribute pair is the elementwise difference of
//! their displacement vectors: all zeros means the two attributes were
//! permuted identically and their joint distribution is intact. The
//! measure `pair_infoloss` is a power mean of the absolute differences
//! with aversion `theta >= 1`; larger `theta` weights the worst-preserved
//! records more, up to the single largest difference at `theta = +inf`.

use crate::dominance::{compare_curves, DominanceVerdict, Preference};
use crate::error::{Error, Result};
use crate::exponent::{validate_exponent, ExponentGrid, MeasureKind};
use crate::microdata::Ranking;
use crate::permutation::DisplacementVector;
use crate::power_mean::power_mean_nonneg;

/// Elementwise difference of two attributes' rank displacements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeDisplacement {
    first: String,
    second: String,
    delta: Vec<i64>,
}

impl RelativeDisplacement {
    pub fn new(
        first: impl Into<String>,
        second: impl Into<String>,
        delta: Vec<i64>,
    ) -> Result<Self> {
        let first = first.into();
        let second = second.into();
        if first == second {
            return Err(Error::SameAttribute(first));
        }
        Ok(Self {
            first,
            second,
            delta,
        })
    }

    pub fn first(&self) -> &str {
        &self.first
    }

    pub fn second(&self) -> &str {
        &self.second
    }

    /// Report key, `first|second`.
    pub fn key(&self) -> String {
        format!("{}|{}", self.first, self.second)
    }

    pub fn delta(&self) -> &[i64] {
        &self.delta
    }

    pub fn n(&self) -> usize {
        self.delta.len()
    }

    fn abs_delta(&self) -> Vec<f64> {
        self.delta.iter().map(|d| d.unsigned_abs() as f64).collect()
    }
}

/// Relative displacement of a pair of attributes, using raw integer
/// displacements (no epsilon substitution).
pub fn relative_displacement(
    a: &DisplacementVector,
    b: &DisplacementVector,
) -> Result<RelativeDisplacement> {
    if a.attribute() == b.attribute() {
        return Err(Error::SameAttribute(a.attribute().to_string()));
    }
    if a.n() != b.n() {
        return Err(Error::LengthMismatch { a: a.n(), b: b.n() });
    }
    let delta = a.raw().iter().zip(b.raw()).map(|(x, y)| x - y).collect();
    RelativeDisplacement::new(a.attribute(), b.attribute(), delta)
}

/// Every unordered attribute pair `(j, j')` with `j < j'` in column order.
pub fn attribute_pairs(displacements: &[DisplacementVector]) -> Result<Vec<RelativeDisplacement>> {
    let mut out = Vec::with_capacity(displacements.len() * (displacements.len() - 1) / 2);
    for (i, a) in displacements.iter().enumerate() {
        for b in &displacements[i + 1..] {
            out.push(relative_displacement(a, b)?);
        }
    }
    Ok(out)
}

/// Information loss of one attribute pair at aversion `theta >= 1`.
/// Zero means the pair's joint rank structure is fully preserved. With
/// `normalize` the value is divided by `n - 1`.
pub fn pair_infoloss(rel: &RelativeDisplacement, theta: f64, normalize: bool) -> Result<f64> {
    validate_exponent(MeasureKind::InfoLoss, theta)?;
    if rel.n() == 0 {
        return Err(Error::EmptyInput);
    }
    let value = power_mean_nonneg(&rel.abs_delta(), theta);
    scaled(value, rel.n(), normalize)
}

/// Dataset-level information loss: an outer power mean with exponent `pi`
/// over the per-pair measures at `theta`. The list must cover every
/// unordered pair of the attribute set exactly once. As `pi` grows toward
/// `+inf` the verdict concentrates on the worst-preserved pair.
pub fn dataset_infoloss(
    rels: &[RelativeDisplacement],
    theta: f64,
    pi: f64,
    normalize: bool,
) -> Result<f64> {
    validate_exponent(MeasureKind::InfoLoss, pi)?;
    validate_pair_coverage(rels)?;
    let inner: Vec<f64> = rels
        .iter()
        .map(|rel| pair_infoloss(rel, theta, normalize))
        .collect::<Result<_>>()?;
    Ok(power_mean_nonneg(&inner, pi))
}

/// Weak information dominance of method A over method B for one attribute
/// pair: A dominates when its loss is at most B's (within `tolerance`) at
/// every grid point.
pub fn info_dominance(
    rel_a: &RelativeDisplacement,
    rel_b: &RelativeDisplacement,
    grid: &ExponentGrid,
    tolerance: f64,
) -> Result<DominanceVerdict> {
    if grid.kind() != MeasureKind::InfoLoss {
        return Err(Error::InfoExponentOutOfRange(
            grid.finite_values()
                .first()
                .copied()
                .unwrap_or(f64::NEG_INFINITY),
        ));
    }
    if rel_a.key() != rel_b.key() {
        return Err(Error::PairKeyMismatch {
            a: rel_a.key(),
            b: rel_b.key(),
        });
    }
    if rel_a.n() != rel_b.n() {
        return Err(Error::LengthMismatch {
            a: rel_a.n(),
            b: rel_b.n(),
        });
    }
    let curve = |rel: &RelativeDisplacement| -> Result<Vec<f64>> {
        grid.exponents()
            .into_iter()
            .map(|theta| pair_infoloss(rel, theta, false))
            .collect()
    };
    let a = curve(rel_a)?;
    let b = curve(rel_b)?;
    compare_curves(grid, &a, &b, Preference::LowerIsBetter, tolerance)
}

/// `pair_infoloss` evaluated at every grid point, limit endpoint included.
pub fn info_curve(
    rel: &RelativeDisplacement,
    grid: &ExponentGrid,
    normalize: bool,
) -> Result<Vec<(f64, f64)>> {
    if grid.kind() != MeasureKind::InfoLoss {
        return Err(Error::InfoExponentOutOfRange(
            grid.finite_values()
                .first()
                .copied()
                .unwrap_or(f64::NEG_INFINITY),
        ));
    }
    grid.exponents()
        .into_iter()
        .map(|theta| Ok((theta, pair_infoloss(rel, theta, normalize)?)))
        .collect()
}

/// Spearman rank correlation between an attribute's original ranking and
/// the ranking of its reverse-mapped column:
/// `rho = 1 - 6 * sum(d_i^2) / (n (n^2 - 1))`.
pub fn spearman(rank_x: &Ranking, rank_z: &Ranking) -> Result<f64> {
    if rank_x.direction() != rank_z.direction() {
        return Err(Error::DirectionMismatch);
    }
    if rank_x.n() != rank_z.n() {
        return Err(Error::LengthMismatch {
            a: rank_x.n(),
            b: rank_z.n(),
        });
    }
    let n = rank_x.n();
    if n < 2 {
        return Err(Error::TooFewForCorrelation(n));
    }
    let sum_d2: i64 = rank_x
        .ranks()
        .iter()
        .zip(rank_z.ranks())
        .map(|(&a, &b)| {
            let d = a as i64 - b as i64;
            d * d
        })
        .sum();
    let n = n as f64;
    Ok(1.0 - 6.0 * sum_d2 as f64 / (n * (n * n - 1.0)))
}

fn validate_pair_coverage(rels: &[RelativeDisplacement]) -> Result<()> {
    if rels.is_empty() {
        return Err(Error::PairCoverage("no pairs given".into()));
    }
    let mut names: Vec<&str> = Vec::new();
    let mut keys = std::collections::HashSet::new();
    for rel in rels {
        for name in [rel.first(), rel.second()] {
            if !names.contains(&name) {
                names.push(name);
            }
        }
        let unordered = if rel.first() < rel.second() {
            (rel.first(), rel.second())
        } else {
            (rel.second(), rel.first())
        };
        if !keys.insert(unordered) {
            return Err(Error::PairCoverage(format!(
                "pair '{}' appears twice",
                rel.key()
            )));
        }
    }
    let expected = names.len() * (names.len() - 1) / 2;
    if rels.len() != expected {
        return Err(Error::PairCoverage(format!(
            "{} attributes need {} pairs, got {}",
            names.len(),
            expected,
            rels.len()
        )));
    }
    Ok(())
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
