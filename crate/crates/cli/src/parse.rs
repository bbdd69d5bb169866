//! Flag-value and spec-file parsing.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use permaudit::{parse_exponent, Dataset, ExponentGrid, MeasureKind, RankDirection};

use crate::Failure;

/// Grid flag syntax: a single value, a comma list, or `min:max:step`.
pub fn parse_grid(spec: &str, kind: MeasureKind, no_limits: bool) -> Result<ExponentGrid, Failure> {
    let values = parse_grid_values(spec)?;
    let grid = match kind {
        MeasureKind::Risk => ExponentGrid::risk(values),
        MeasureKind::InfoLoss => ExponentGrid::info(values),
    }
    .map_err(|e| Failure::usage(format!("--alpha/--theta: {e}")))?;
    Ok(if no_limits { grid } else { grid.with_limit() })
}

fn parse_grid_values(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |s: &str| Failure::usage(format!("cannot parse grid value '{s}'"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Failure::usage(format!(
                "grid range must be min:max:step, got '{spec}'"
            )));
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad(parts[0]))?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad(parts[1]))?;
        let step: f64 = parts[2].trim().parse().map_err(|_| bad(parts[2]))?;
        if !step.is_finite() || step <= 0.0 || !min.is_finite() || !max.is_finite() || min > max {
            return Err(Failure::usage(format!("invalid grid range '{spec}'")));
        }
        let count = ((max - min) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|k| min + k as f64 * step).collect());
    }
    spec.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>().map_err(|_| bad(tok)).and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Failure::usage(format!("grid value '{tok}' must be finite")))
                }
            })
        })
        .collect()
}

/// Single exponent flag (`--beta`, `--pi`); accepts -inf/+inf literals.
pub fn parse_single_exponent(flag: &str, spec: &str) -> Result<f64, Failure> {
    parse_exponent(spec).ok_or_else(|| Failure::usage(format!("{flag}: cannot parse '{spec}'")))
}

pub fn parse_direction(spec: &str) -> Result<RankDirection, Failure> {
    match spec.trim() {
        "descending" | "desc" => Ok(RankDirection::Descending),
        "ascending" | "asc" => Ok(RankDirection::Ascending),
        other => Err(Failure::usage(format!(
            "--direction must be 'descending' or 'ascending', got '{other}'"
        ))),
    }
}

/// 1-based comma-separated record list, e.g. `2,3`.
pub fn parse_rows(spec: &str) -> Result<Vec<usize>, Failure> {
    spec.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let idx: usize = tok
                .parse()
                .map_err(|_| Failure::usage(format!("--rows: '{tok}' is not a record index")))?;
            if idx == 0 {
                return Err(Failure::usage("--rows: record indices are 1-based".into()));
            }
            Ok(idx - 1)
        })
        .collect()
}

/// Semicolon-separated groups of comma-separated names: `a,b;c`.
pub fn parse_blocks(spec: &str) -> Result<Vec<Vec<String>>, Failure> {
    let blocks: Vec<Vec<String>> = spec
        .split(';')
        .map(|group| {
            group
                .split(',')
                .map(|name| name.trim().to_string())
                .filter(|name| !name.is_empty())
                .collect::<Vec<String>>()
        })
        .filter(|group: &Vec<String>| !group.is_empty())
        .collect();
    if blocks.is_empty() {
        return Err(Failure::usage("--blocks: no attribute groups given".into()));
    }
    Ok(blocks)
}

/// `--sigma` flag: one value for all attributes or one per column.
pub fn parse_sigma(spec: &str, p: usize) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("--sigma: cannot parse '{tok}'")))
        })
        .collect::<Result<_, _>>()?;
    if values.len() == 1 {
        return Ok(vec![values[0]; p]);
    }
    if values.len() != p {
        return Err(Failure::usage(format!(
            "--sigma: expected 1 or {p} values, got {}",
            values.len()
        )));
    }
    Ok(values)
}

/// Key-value method configuration file (TOML).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpecFile {
    pub seed: Option<u64>,
    pub distribution: Option<String>,
    pub sigma: Option<SigmaField>,
    /// 1-based record indices.
    pub rows: Option<Vec<usize>>,
    pub blocks: Option<Vec<Vec<String>>>,
    pub dmax: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SigmaField {
    Uniform(f64),
    PerColumn(BTreeMap<String, f64>),
}

impl MethodSpecFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::data(format!("cannot read '{}': {e}", path.display())))?;
        let spec: MethodSpecFile = toml::from_str(&text)
            .map_err(|e| Failure::usage(format!("'{}': {e}", path.display())))?;
        if let Some(dist) = &spec.distribution {
            if dist != "gaussian" {
                return Err(Failure::usage(format!(
                    "distribution '{dist}' is not supported (only 'gaussian')"
                )));
            }
        }
        Ok(spec)
    }

    /// Resolve the per-column standard deviations against a dataset.
    pub fn sigmas_for(&self, dataset: &Dataset) -> Result<Option<Vec<f64>>, Failure> {
        match &self.sigma {
            None => Ok(None),
            Some(SigmaField::Uniform(s)) => Ok(Some(vec![*s; dataset.p()])),
            Some(SigmaField::PerColumn(map)) => {
                for name in map.keys() {
                    if dataset.column(name).is_none() {
                        return Err(Failure::infeasible(format!(
                            "sigma names unknown attribute '{name}'"
                        )));
                    }
                }
                Ok(Some(
                    dataset
                        .columns()
                        .iter()
                        .map(|c| map.get(c.name()).copied().unwrap_or(0.0))
                        .collect(),
                ))
            }
        }
    }
}
