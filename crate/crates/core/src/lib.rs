//! Permutation-based auditing of microdata anonymization.
//!
//! Any masking of a rankable dataset is functionally a permutation of each
//! attribute plus noise too small to change ranks. This crate makes that
//! decomposition explicit and measures it:
//!
//! - [`microdata`] ingests and ranks paired original/masked datasets;
//! - [`permutation`] extracts per-attribute permutations, the
//!   reverse-mapped dataset Z, the residual noise E and rank-displacement
//!   vectors;
//! - [`risk`] scores disclosure risk from the displacements with
//!   aversion-parameterized power means (exponents `<= 1`);
//! - [`infoloss`] scores information loss from relative displacements
//!   between attribute pairs (exponents `>= 1`);
//! - [`dominance`] decides when one masking unanimously beats another
//!   across a whole grid of aversion levels;
//! - [`anonymize`] provides seeded reference maskings for experiments;
//! - [`report`] assembles everything into a stable JSON document.
//!
//! ```
//! use permaudit::{audit, AuditConfig, samples};
//!
//! let report = audit(&samples::demo_pair(), &AuditConfig::default())?;
//! let shares: Vec<f64> = report.attributes.iter().map(|a| a.trace_ratio).collect();
//! assert_eq!(shares, vec![0.0, 0.6, 0.8]);
//! # Ok::<(), permaudit::Error>(())
//! ```

pub mod anonymize;
pub mod dominance;
pub mod error;
pub mod exponent;
pub mod infoloss;
pub mod microdata;
pub mod permutation;
pub mod power_mean;
pub mod report;
pub mod risk;
pub mod samples;

pub use anonymize::{
    add_noise, apply_permutations, block_permute, local_noise, sample_bounded_permutation,
    BlockSpec, NoiseDistribution, NoiseSpec, RankNoiseReport,
};
pub use dominance::{DominanceVerdict, Relation};
pub use error::{Error, Result};
pub use exponent::{format_exponent, parse_exponent, ExponentGrid, MeasureKind};
pub use infoloss::{
    attribute_pairs, dataset_infoloss, info_curve, info_dominance, pair_infoloss,
    relative_displacement, spearman, RelativeDisplacement,
};
pub use microdata::{
    rank_attribute, AttributeColumn, ColumnData, Dataset, PairedDatasets, RankDirection, Ranking,
};
pub use permutation::{
    displacement_vector, epsilonize, extract_permutation, parse_permutation_file,
    permutations_to_text, reverse_map, Decomposition, DisplacementVector, Permutation,
    PermutationMatrix, ResidualColumn,
};
pub use power_mean::power_mean;
pub use report::{
    audit, check_comparable, curve_csv, dataset_info_csv, dataset_risk_csv, dominance_report,
    AttributeReport, AuditConfig, AuditReport, CurvePoint, DatasetSection, DominanceEntry,
    PairReport, ReportMeta,
};
pub use risk::{
    attribute_risk, combined_risk, dataset_risk, risk_curve, risk_dominance, trace_ratio,
};
