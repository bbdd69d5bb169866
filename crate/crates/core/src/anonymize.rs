//! Reference masking methods for generating test pairs and constructive
//! scenarios: global and local noise addition, block permutation, direct
//! permutation input, and bounded-displacement permutation sampling.
//!
//! Every operation is a pure function of its inputs and a 64-bit seed.
//! Randomness comes from ChaCha8 with one dedicated stream per
//! (seed, column, row) cell — or per block, or per sampling call — so
//! results cannot depend on evaluation order and per-attribute parallelism
//! yields bitwise-identical output.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::microdata::{AttributeColumn, ColumnData, Dataset};
use crate::permutation::Permutation;

/// Per-attribute Gaussian noise description.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    sigmas: Vec<f64>,
    seed: u64,
    distribution: NoiseDistribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseDistribution {
    #[default]
    Gaussian,
}

impl NoiseSpec {
    /// One standard deviation per attribute, in column order.
    pub fn gaussian(sigmas: Vec<f64>, seed: u64) -> Result<Self> {
        for (i, &s) in sigmas.iter().enumerate() {
            if !s.is_finite() || s < 0.0 {
                return Err(Error::BadSigma {
                    column: format!("#{}", i + 1),
                    value: s,
                });
            }
        }
        Ok(Self {
            sigmas,
            seed,
            distribution: NoiseDistribution::Gaussian,
        })
    }

    /// The same standard deviation for all `p` attributes.
    pub fn uniform(sigma: f64, p: usize, seed: u64) -> Result<Self> {
        Self::gaussian(vec![sigma; p], seed)
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn validate_against(&self, x: &Dataset) -> Result<()> {
        if self.sigmas.len() != x.p() {
            return Err(Error::LengthMismatch {
                a: self.sigmas.len(),
                b: x.p(),
            });
        }
        for (col, &sigma) in x.columns().iter().zip(&self.sigmas) {
            if sigma > 0.0 && !col.data().is_numeric() {
                return Err(Error::NonNumericColumn(col.name().to_string()));
            }
        }
        Ok(())
    }
}

/// A partition of the attribute names into blocks that share one
/// permutation each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    blocks: Vec<Vec<String>>,
    seed: u64,
}

impl BlockSpec {
    pub fn new(blocks: Vec<Vec<String>>, seed: u64) -> Self {
        Self { blocks, seed }
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Column indices per block; errors unless every attribute of `x`
    /// appears in exactly one block.
    fn column_indices(&self, x: &Dataset) -> Result<Vec<Vec<usize>>> {
        let names = x.column_names();
        let mut assigned = vec![false; names.len()];
        let mut out = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let mut indices = Vec::with_capacity(block.len());
            for name in block {
                let idx = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::BadPartition(format!("unknown attribute '{name}'")))?;
                if assigned[idx] {
                    return Err(Error::BadPartition(format!(
                        "attribute '{name}' appears twice"
                    )));
                }
                assigned[idx] = true;
                indices.push(idx);
            }
            out.push(indices);
        }
        if let Some(missing) = assigned.iter().position(|a| !a) {
            return Err(Error::BadPartition(format!(
                "attribute '{}' is not covered",
                names[missing]
            )));
        }
        Ok(out)
    }
}

// Stream-id layout: two tag bits, then use-specific indices. ChaCha8
// supports 2^64 independent streams per seed.
const TAG_CELL: u64 = 0;
const TAG_BLOCK: u64 = 1 << 62;
const TAG_SAMPLE: u64 = 2 << 62;

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn cell_rng(seed: u64, column: usize, row: usize) -> ChaCha8Rng {
    // Supports up to 2^22 columns and 2^40 rows.
    stream_rng(seed, TAG_CELL | ((column as u64) << 40) | row as u64)
}

/// Add independent Gaussian noise to every cell of every numeric
/// attribute. Deterministic for a fixed seed.
pub fn add_noise(x: &Dataset, spec: &NoiseSpec) -> Result<Dataset> {
    let all_rows: Vec<usize> = (0..x.n()).collect();
    noise_rows(x, &all_rows, spec)
}

/// Add noise only to the listed records (0-based row indices); every other
/// cell is copied verbatim. With a full row set this is exactly
/// [`add_noise`], draw for draw.
pub fn local_noise(x: &Dataset, rows: &[usize], spec: &NoiseSpec) -> Result<Dataset> {
    for &row in rows {
        if row >= x.n() {
            return Err(Error::RowOutOfRange {
                index: row,
                n: x.n(),
            });
        }
    }
    noise_rows(x, rows, spec)
}

fn noise_rows(x: &Dataset, rows: &[usize], spec: &NoiseSpec) -> Result<Dataset> {
    spec.validate_against(x)?;
    let masked: std::collections::HashSet<usize> = rows.iter().copied().collect();
    let columns: Vec<AttributeColumn> = x
        .columns()
        .par_iter()
        .enumerate()
        .map(|(c, col)| {
            let sigma = spec.sigmas()[c];
            if sigma == 0.0 {
                return col.clone();
            }
            let values = col.numeric_values().expect("validated numeric");
            let normal = Normal::new(0.0, sigma).expect("validated sigma");
            let noisy: Vec<f64> = values
                .iter()
                .enumerate()
                .map(|(row, &v)| {
                    if masked.contains(&row) {
                        v + normal.sample(&mut cell_rng(spec.seed(), c, row))
                    } else {
                        v
                    }
                })
                .collect();
            col.with_data(ColumnData::Numeric(noisy))
        })
        .collect();
    Ok(x.with_columns(x.name(), columns))
}

/// Permute records, one shared random permutation per block of attributes,
/// so within-block joint distributions are preserved exactly.
pub fn block_permute(x: &Dataset, spec: &BlockSpec) -> Result<Dataset> {
    let blocks = spec.column_indices(x)?;
    let mut columns: Vec<Option<AttributeColumn>> = vec![None; x.p()];
    for (b, indices) in blocks.iter().enumerate() {
        let mut image: Vec<usize> = (0..x.n()).collect();
        image.shuffle(&mut stream_rng(spec.seed(), TAG_BLOCK | b as u64));
        let perm = Permutation::from_image(image).expect("shuffle of 0..n is a bijection");
        for &c in indices {
            columns[c] = Some(crate::microdata::reorder_column(
                &x.columns()[c],
                perm.image(),
            ));
        }
    }
    let columns = columns
        .into_iter()
        .map(|c| c.expect("partition covers all"))
        .collect();
    Ok(x.with_columns(x.name(), columns))
}

/// Cells that received zero noise during rank-preserving noise addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RankNoiseReport {
    /// Tied base values leave no room to move; these cells stay exact.
    pub tied_cells: usize,
    /// Cells where the draw budget was exhausted before a rank-safe value
    /// appeared; these also fall back to zero noise.
    pub exhausted_cells: usize,
}

const RANK_NOISE_ATTEMPTS: usize = 32;

/// Apply one permutation per attribute, optionally followed by noise that
/// provably cannot re-rank any column.
///
/// Each noisy value is confined to the open interval between the midpoints
/// toward its neighbouring order statistics; the intervals are disjoint,
/// so every column's rank vector is preserved no matter what is drawn.
/// Draws landing outside the interval are retried up to a fixed budget,
/// after which the cell keeps its exact value; the returned report counts
/// those fallbacks.
pub fn apply_permutations(
    x: &Dataset,
    perms: &[Permutation],
    noise: Option<&NoiseSpec>,
) -> Result<(Dataset, RankNoiseReport)> {
    if perms.len() != x.p() {
        return Err(Error::LengthMismatch {
            a: perms.len(),
            b: x.p(),
        });
    }
    for perm in perms {
        if perm.len() != x.n() {
            return Err(Error::LengthMismatch {
                a: perm.len(),
                b: x.n(),
            });
        }
    }
    if let Some(spec) = noise {
        spec.validate_against(x)?;
    }

    let per_column: Vec<(AttributeColumn, RankNoiseReport)> = x
        .columns()
        .par_iter()
        .enumerate()
        .map(|(c, col)| {
            let permuted = crate::microdata::reorder_column(col, perms[c].image());
            let sigma = noise.map(|s| s.sigmas()[c]).unwrap_or(0.0);
            if sigma == 0.0 {
                return (permuted, RankNoiseReport::default());
            }
            let spec = noise.expect("sigma > 0 implies a spec");
            let values = permuted
                .numeric_values()
                .expect("validated numeric")
                .to_vec();
            let (noisy, report) = rank_preserving_noise(&values, sigma, spec.seed(), c);
            (permuted.with_data(ColumnData::Numeric(noisy)), report)
        })
        .collect();

    let mut columns = Vec::with_capacity(per_column.len());
    let mut report = RankNoiseReport::default();
    for (col, r) in per_column {
        columns.push(col);
        report.tied_cells += r.tied_cells;
        report.exhausted_cells += r.exhausted_cells;
    }
    Ok((x.with_columns(x.name(), columns), report))
}

fn rank_preserving_noise(
    values: &[f64],
    sigma: f64,
    seed: u64,
    column: usize,
) -> (Vec<f64>, RankNoiseReport) {
    let n = values.len();
    // Sorted positions; stable by row so tied values form adjacent runs.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));

    // Open interval per sorted position, bounded by midpoints toward the
    // neighbouring order statistics. Tied neighbours collapse the
    // interval to a point.
    let mut lo = vec![f64::NEG_INFINITY; n];
    let mut hi = vec![f64::INFINITY; n];
    for k in 0..n {
        let row = order[k];
        if k > 0 {
            lo[row] = (values[order[k - 1]] + values[row]) / 2.0;
        }
        if k + 1 < n {
            hi[row] = (values[row] + values[order[k + 1]]) / 2.0;
        }
    }

    let normal = Normal::new(0.0, sigma).expect("validated sigma");
    let mut out = Vec::with_capacity(n);
    let mut report = RankNoiseReport::default();
    for (row, &v) in values.iter().enumerate() {
        if lo[row] >= v || hi[row] <= v {
            // Tie with a neighbour: the safe interval is empty.
            report.tied_cells += 1;
            out.push(v);
            continue;
        }
        let mut rng = cell_rng(seed, column, row);
        let mut accepted = None;
        for _ in 0..RANK_NOISE_ATTEMPTS {
            let candidate = v + normal.sample(&mut rng);
            if candidate > lo[row] && candidate < hi[row] {
                accepted = Some(candidate);
                break;
            }
        }
        match accepted {
            Some(y) => out.push(y),
            None => {
                report.exhausted_cells += 1;
                out.push(v);
            }
        }
    }
    (out, report)
}

/// Sample a seeded random permutation whose every rank displacement is at
/// most `dmax` in absolute value.
///
/// Positions are filled left to right from the feasible window; rows about
/// to leave the window are taken first. The induced distribution over
/// bounded permutations is deterministic per seed but not uniform.
pub fn sample_bounded_permutation(n: usize, dmax: usize, seed: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if dmax > n - 1 {
        return Err(Error::BadDisplacementBound { dmax, max: n - 1 });
    }
    let mut rng = stream_rng(seed, TAG_SAMPLE);
    let mut unused: Vec<usize> = (0..n).collect();
    let mut image = Vec::with_capacity(n);
    for i in 0..n {
        // A row at i - dmax has no later position left; it must go now.
        let forced = i
            .checked_sub(dmax)
            .and_then(|floor| unused.iter().position(|&j| j == floor));
        let pick = match forced {
            Some(pos) => pos,
            None => {
                let window: Vec<usize> = unused
                    .iter()
                    .enumerate()
                    .filter(|(_, &j)| j <= i + dmax)
                    .map(|(pos, _)| pos)
                    .collect();
                window[rng.random_range(0..window.len())]
            }
        };
        image.push(unused.remove(pick));
    }
    Permutation::from_image(image)
}
