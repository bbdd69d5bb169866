//! Dominance verdicts between measure curves.
//!
//! A method dominates another when it is at least as good at every grid
//! point (weak dominance, ties allowed). Verdicts are decided on a finite
//! grid plus the analytic limit endpoint; the grid is echoed in the
//! verdict so the claim is auditable.

use crate::error::{Error, Result};
use crate::exponent::ExponentGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    ADominatesB,
    BDominatesA,
    /// Curves equal within tolerance at every grid point.
    Equivalent,
    /// The better side flips somewhere on the grid.
    Crossing,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::ADominatesB => "a_dominates_b",
            Relation::BDominatesA => "b_dominates_a",
            Relation::Equivalent => "equivalent",
            Relation::Crossing => "crossing",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceVerdict {
    pub relation: Relation,
    /// Grid exponents at which the strictly-better side flips; nonempty
    /// exactly when `relation` is `Crossing`.
    pub crossing_points: Vec<f64>,
    pub grid: ExponentGrid,
}

/// Whether larger or smaller curve values are preferable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Preference {
    HigherIsBetter,
    LowerIsBetter,
}

pub(crate) fn compare_curves(
    grid: &ExponentGrid,
    a: &[f64],
    b: &[f64],
    preference: Preference,
    tolerance: f64,
) -> Result<DominanceVerdict> {
    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::BadTolerance(tolerance));
    }
    let exponents = grid.exponents();
    debug_assert_eq!(exponents.len(), a.len());
    debug_assert_eq!(exponents.len(), b.len());

    #[derive(Clone, Copy, PartialEq)]
    enum Side {
        A,
        B,
        Tie,
    }

    let side = |va: f64, vb: f64| -> Side {
        if (va - vb).abs() <= tolerance {
            Side::Tie
        } else {
            let a_better = match preference {
                Preference::HigherIsBetter => va > vb,
                Preference::LowerIsBetter => va < vb,
            };
            if a_better {
                Side::A
            } else {
                Side::B
            }
        }
    };

    let sides: Vec<Side> = a.iter().zip(b).map(|(&va, &vb)| side(va, vb)).collect();
    let any_a = sides.contains(&Side::A);
    let any_b = sides.contains(&Side::B);

    let (relation, crossing_points) = match (any_a, any_b) {
        (false, false) => (Relation::Equivalent, Vec::new()),
        (true, false) => (Relation::ADominatesB, Vec::new()),
        (false, true) => (Relation::BDominatesA, Vec::new()),
        (true, true) => {
            let mut flips = Vec::new();
            let mut last_strict: Option<Side> = None;
            for (s, &e) in sides.iter().zip(&exponents) {
                match s {
                    Side::Tie => {}
                    strict => {
                        if let Some(prev) = last_strict {
                            if prev != *strict {
                                flips.push(e);
                            }
                        }
                        last_strict = Some(*strict);
                    }
                }
            }
            (Relation::Crossing, flips)
        }
    };

    Ok(DominanceVerdict {
        relation,
        crossing_points,
        grid: grid.clone(),
    })
}
