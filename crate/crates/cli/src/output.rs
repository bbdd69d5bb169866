//! File outputs: atomic writes, curve exports and the anonymize manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use permaudit::{curve_csv, dataset_info_csv, dataset_risk_csv, AuditReport};

use crate::Failure;

/// Write through a temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let fail = |e: &dyn std::fmt::Display| {
        Failure::data(format!("cannot write '{}': {e}", path.display()))
    };
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&parent).map_err(|e| fail(&e))?;
    tmp.write_all(bytes).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e))?;
    Ok(())
}

/// Plot-ready delimited curves: one file per attribute and per pair, plus
/// the two dataset-level grids.
pub fn export_curves(dir: &Path, report: &AuditReport) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::data(format!("cannot create '{}': {e}", dir.display())))?;
    for attribute in &report.attributes {
        let path = dir.join(format!("risk_{}.csv", sanitize(&attribute.name)));
        write_atomic(&path, curve_csv(&attribute.risk_curve).as_bytes())?;
    }
    for pair in &report.pairs {
        let path = dir.join(format!(
            "info_{}__{}.csv",
            sanitize(&pair.first),
            sanitize(&pair.second)
        ));
        write_atomic(&path, curve_csv(&pair.info_curve).as_bytes())?;
    }
    write_atomic(
        &dir.join("dataset_risk.csv"),
        dataset_risk_csv(&report.dataset.risk).as_bytes(),
    )?;
    if !report.dataset.info.is_empty() {
        write_atomic(
            &dir.join("dataset_info.csv"),
            dataset_info_csv(&report.dataset.info).as_bytes(),
        )?;
    }
    Ok(())
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

/// Sidecar manifest written next to every anonymize output.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub method: String,
    pub seed: u64,
    pub sigma: Option<Vec<f64>>,
    /// 1-based record indices, as given.
    pub rows: Option<Vec<usize>>,
    pub blocks: Option<Vec<Vec<String>>>,
    pub dmax: Option<usize>,
    pub perm_file: Option<String>,
    /// 1-based images actually applied, one per attribute.
    pub permutations: Option<Vec<ManifestPermutation>>,
    pub rank_noise: Option<RankNoiseSummary>,
}

#[derive(Debug, Serialize)]
pub struct ManifestPermutation {
    pub attribute: String,
    pub image: Vec<usize>,
}

#[derive(Debug, Serialize)]
pub struct RankNoiseSummary {
    pub tied_cells: usize,
    pub exhausted_cells: usize,
}

impl Manifest {
    pub fn new(method: &str, seed: u64) -> Self {
        Self {
            method: method.to_string(),
            seed,
            sigma: None,
            rows: None,
            blocks: None,
            dmax: None,
            perm_file: None,
            permutations: None,
            rank_noise: None,
        }
    }

    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out
            .file_name()
            .map(|n| n.to_os_string())
            .unwrap_or_default();
        name.push(".manifest.json");
        out.with_file_name(name)
    }

    pub fn write(&self, out: &Path) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        write_atomic(&Self::path_for(out), text.as_bytes())
    }
}
