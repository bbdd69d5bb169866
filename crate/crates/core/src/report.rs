//! Audit and dominance reports.
//!
//! One JSON-shaped document with fixed sections {meta, attributes, pairs,
//! dataset, dominance, warnings}. Audits fill the measure sections and
//! leave `dominance` empty; dominance comparisons do the opposite. Given a
//! fixed configuration the rendering is byte-stable. Exponents appear as
//! strings ("-inf", "0.5", "+inf") so the limit rows survive JSON.

use serde::{Deserialize, Serialize};

use crate::dominance::DominanceVerdict;
use crate::error::{Error, Result};
use crate::exponent::{format_exponent, validate_exponent, ExponentGrid, MeasureKind};
use crate::infoloss::{attribute_pairs, dataset_infoloss, info_curve, info_dominance, spearman};
use crate::microdata::{rank_attribute, PairedDatasets, RankDirection};
use crate::permutation::{reverse_map, Decomposition};
use crate::risk::{combined_risk, dataset_risk, risk_curve, risk_dominance, trace_ratio};

/// Grid, exponent and scaling settings shared by the audit and dominance
/// pipelines.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub alpha_grid: ExponentGrid,
    pub theta_grid: ExponentGrid,
    /// Outer exponent over attributes for the dataset risk grid.
    pub beta: f64,
    /// Outer exponent over attribute pairs for the dataset info grid.
    pub pi: f64,
    pub epsilon: f64,
    pub normalize: bool,
    pub direction: RankDirection,
    /// Absolute comparison tolerance for dominance verdicts. Differences
    /// below the epsilon substitute are artifacts, so the default equals
    /// the default epsilon.
    pub tolerance: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            alpha_grid: ExponentGrid::default_risk(),
            theta_grid: ExponentGrid::default_info(),
            beta: 1.0,
            pi: 1.0,
            epsilon: 1e-8,
            normalize: false,
            direction: RankDirection::Descending,
            tolerance: 1e-8,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_grid.kind() != MeasureKind::Risk {
            return Err(Error::RiskExponentOutOfRange(f64::INFINITY));
        }
        if self.theta_grid.kind() != MeasureKind::InfoLoss {
            return Err(Error::InfoExponentOutOfRange(f64::NEG_INFINITY));
        }
        validate_exponent(MeasureKind::Risk, self.beta)?;
        validate_exponent(MeasureKind::InfoLoss, self.pi)?;
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(Error::BadEpsilon(self.epsilon));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(Error::BadTolerance(self.tolerance));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AuditReport {
    pub meta: ReportMeta,
    pub attributes: Vec<AttributeReport>,
    pub pairs: Vec<PairReport>,
    pub dataset: DatasetSection,
    pub dominance: Vec<DominanceEntry>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub original: String,
    pub masked: String,
    pub original_b: Option<String>,
    pub masked_b: Option<String>,
    pub records: usize,
    pub attributes: usize,
    pub epsilon: f64,
    pub normalize: bool,
    pub direction: String,
    pub alpha_grid: Vec<String>,
    pub theta_grid: Vec<String>,
    pub beta: String,
    pub pi: String,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AttributeReport {
    pub name: String,
    /// Qualitative risk T: share of permuted records.
    pub trace_ratio: f64,
    /// TD: T times the mean permutation distance.
    pub combined_risk: f64,
    /// Rank correlation between the original and reverse-mapped column.
    pub spearman: f64,
    pub tie_groups_original: usize,
    pub tie_groups_masked: usize,
    /// Extracted permutation image, 1-based.
    pub permutation: Vec<usize>,
    pub displacements: Vec<i64>,
    pub risk_curve: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PairReport {
    pub first: String,
    pub second: String,
    pub key: String,
    pub delta: Vec<i64>,
    pub info_curve: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CurvePoint {
    pub exponent: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetSection {
    pub risk: Vec<DatasetRiskPoint>,
    pub info: Vec<DatasetInfoPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetRiskPoint {
    pub alpha: String,
    pub beta: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetInfoPoint {
    pub theta: String,
    pub pi: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DominanceEntry {
    /// Attribute name for risk verdicts, `first|second` for info verdicts.
    pub subject: String,
    pub measure: String,
    pub relation: String,
    pub crossing_points: Vec<String>,
}

impl AuditReport {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadCell {
            row: 0,
            column: "report".into(),
            value: e.to_string(),
            expected: "a report document".into(),
        })
    }
}

const ROW_ORDER_NOTE: &str = "displacements are counted in the file's row order; \
reordering the released rows changes the displacement vectors";

/// Run the full audit pipeline on a validated pair.
pub fn audit(pair: &PairedDatasets, config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    let dec = reverse_map(pair, config.direction);
    let mut warnings = vec![ROW_ORDER_NOTE.to_string()];
    tie_warnings(&dec, "", &mut warnings);

    let mut attributes = Vec::with_capacity(pair.p());
    for (j, col) in pair.original().columns().iter().enumerate() {
        let perm = &dec.permutations()[j];
        let d = &dec.displacements()[j];
        let rank_x = &dec.original_rankings()[j];
        let rank_z = rank_attribute(&dec.z().columns()[j], config.direction);
        let curve = risk_curve(d, &config.alpha_grid, config.epsilon, config.normalize)?;
        for (alpha, value) in &curve {
            if *value == 0.0 {
                warnings.push(format!(
                    "attribute '{}': risk underflowed below the smallest normal float at exponent {} and was clamped to 0",
                    col.name(),
                    format_exponent(*alpha)
                ));
            }
        }
        attributes.push(AttributeReport {
            name: col.name().to_string(),
            trace_ratio: trace_ratio(perm),
            combined_risk: combined_risk(perm, d, config.epsilon)?,
            spearman: spearman(rank_x, &rank_z)?,
            tie_groups_original: rank_x.tie_groups(),
            tie_groups_masked: dec.masked_rankings()[j].tie_groups(),
            permutation: perm.image_one_based(),
            displacements: d.raw().to_vec(),
            risk_curve: to_curve_points(&curve),
        });
    }

    let rels = if pair.p() >= 2 {
        attribute_pairs(dec.displacements())?
    } else {
        Vec::new()
    };
    let mut pairs = Vec::with_capacity(rels.len());
    for rel in &rels {
        let curve = info_curve(rel, &config.theta_grid, config.normalize)?;
        pairs.push(PairReport {
            first: rel.first().to_string(),
            second: rel.second().to_string(),
            key: rel.key(),
            delta: rel.delta().to_vec(),
            info_curve: to_curve_points(&curve),
        });
    }

    let mut dataset = DatasetSection {
        risk: Vec::new(),
        info: Vec::new(),
    };
    for alpha in config.alpha_grid.exponents() {
        let value = dataset_risk(
            dec.displacements(),
            alpha,
            config.beta,
            config.epsilon,
            config.normalize,
        )?;
        dataset.risk.push(DatasetRiskPoint {
            alpha: format_exponent(alpha),
            beta: format_exponent(config.beta),
            value,
        });
    }
    if !rels.is_empty() {
        for theta in config.theta_grid.exponents() {
            let value = dataset_infoloss(&rels, theta, config.pi, config.normalize)?;
            dataset.info.push(DatasetInfoPoint {
                theta: format_exponent(theta),
                pi: format_exponent(config.pi),
                value,
            });
        }
    }

    Ok(AuditReport {
        meta: meta(
            "audit",
            pair.original().name(),
            pair.masked().name(),
            None,
            None,
            pair,
            config,
        ),
        attributes,
        pairs,
        dataset,
        dominance: Vec::new(),
        warnings,
    })
}

/// Compare two maskings attribute by attribute (risk) and pair by pair
/// (information loss). Both pairs must describe the same attribute list
/// and record count.
pub fn dominance_report(
    pair_a: &PairedDatasets,
    pair_b: &PairedDatasets,
    config: &AuditConfig,
) -> Result<AuditReport> {
    config.validate()?;
    check_comparable(pair_a, pair_b)?;

    let dec_a = reverse_map(pair_a, config.direction);
    let dec_b = reverse_map(pair_b, config.direction);
    let mut warnings = vec![ROW_ORDER_NOTE.to_string()];
    tie_warnings(&dec_a, "A: ", &mut warnings);
    tie_warnings(&dec_b, "B: ", &mut warnings);

    let mut entries = Vec::new();
    for (da, db) in dec_a.displacements().iter().zip(dec_b.displacements()) {
        let verdict = risk_dominance(da, db, &config.alpha_grid, config.epsilon, config.tolerance)?;
        entries.push(entry(da.attribute(), "risk", &verdict));
    }
    if pair_a.p() >= 2 {
        let rels_a = attribute_pairs(dec_a.displacements())?;
        let rels_b = attribute_pairs(dec_b.displacements())?;
        for (ra, rb) in rels_a.iter().zip(&rels_b) {
            let verdict = info_dominance(ra, rb, &config.theta_grid, config.tolerance)?;
            entries.push(entry(&ra.key(), "info", &verdict));
        }
    }

    Ok(AuditReport {
        meta: meta(
            "dominance",
            pair_a.original().name(),
            pair_a.masked().name(),
            Some(pair_b.original().name().to_string()),
            Some(pair_b.masked().name().to_string()),
            pair_a,
            config,
        ),
        attributes: Vec::new(),
        pairs: Vec::new(),
        dataset: DatasetSection {
            risk: Vec::new(),
            info: Vec::new(),
        },
        dominance: entries,
        warnings,
    })
}

/// The comparability check for dominance: equal record counts and the same
/// attribute list.
pub fn check_comparable(pair_a: &PairedDatasets, pair_b: &PairedDatasets) -> Result<()> {
    if pair_a.n() != pair_b.n() {
        return Err(Error::LengthMismatch {
            a: pair_a.n(),
            b: pair_b.n(),
        });
    }
    let names_a = pair_a.original().column_names();
    let names_b = pair_b.original().column_names();
    if names_a != names_b {
        let index = names_a
            .iter()
            .zip(&names_b)
            .position(|(a, b)| a != b)
            .unwrap_or(names_a.len().min(names_b.len()));
        return Err(Error::ColumnNameMismatch {
            index: index + 1,
            a: names_a.get(index).unwrap_or(&"<missing>").to_string(),
            b: names_b.get(index).unwrap_or(&"<missing>").to_string(),
        });
    }
    Ok(())
}

fn entry(subject: &str, measure: &str, verdict: &DominanceVerdict) -> DominanceEntry {
    DominanceEntry {
        subject: subject.to_string(),
        measure: measure.to_string(),
        relation: verdict.relation.as_str().to_string(),
        crossing_points: verdict
            .crossing_points
            .iter()
            .map(|&e| format_exponent(e))
            .collect(),
    }
}

fn tie_warnings(dec: &Decomposition, prefix: &str, warnings: &mut Vec<String>) {
    for (rank, side) in dec
        .original_rankings()
        .iter()
        .map(|r| (r, "original"))
        .chain(dec.masked_rankings().iter().map(|r| (r, "masked")))
    {
        if rank.tie_groups() > 0 {
            warnings.push(format!(
                "{prefix}attribute '{}': {} tie group(s) in the {} ranking; ties broken by row order",
                rank.attribute(),
                rank.tie_groups(),
                side
            ));
        }
    }
}

fn to_curve_points(curve: &[(f64, f64)]) -> Vec<CurvePoint> {
    curve
        .iter()
        .map(|&(e, v)| CurvePoint {
            exponent: format_exponent(e),
            value: v,
        })
        .collect()
}

fn meta(
    command: &str,
    original: &str,
    masked: &str,
    original_b: Option<String>,
    masked_b: Option<String>,
    pair: &PairedDatasets,
    config: &AuditConfig,
) -> ReportMeta {
    ReportMeta {
        tool: "permaudit".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        original: original.into(),
        masked: masked.into(),
        original_b,
        masked_b,
        records: pair.n(),
        attributes: pair.p(),
        epsilon: config.epsilon,
        normalize: config.normalize,
        direction: config.direction.to_string(),
        alpha_grid: config.alpha_grid.labels(),
        theta_grid: config.theta_grid.labels(),
        beta: format_exponent(config.beta),
        pi: format_exponent(config.pi),
        tolerance: config.tolerance,
    }
}

/// Two-column delimited text for one measure curve.
pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("exponent,value\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.exponent, p.value));
    }
    out
}

/// Three-column delimited text for the dataset risk grid.
pub fn dataset_risk_csv(points: &[DatasetRiskPoint]) -> String {
    let mut out = String::from("alpha,beta,value\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.alpha, p.beta, p.value));
    }
    out
}

/// Three-column delimited text for the dataset information-loss grid.
pub fn dataset_info_csv(points: &[DatasetInfoPoint]) -> String {
    let mut out = String::from("theta,pi,value\n");
    for p in points {
        out.push_str(&format!("{},{},{}\n", p.theta, p.pi, p.value));
    }
    out
}
