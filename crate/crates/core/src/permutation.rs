//! Re-expression of a masked dataset as per-attribute permutations.
//!
//! For a pair (X, Y) the reverse mapping reorders each original column so
//! that its rank sequence matches the masked column's. The result is a
//! dataset Z with X's exact marginals, a residual grid E with Y = Z + E on
//! numeric attributes, and one permutation per attribute that fully
//! captures what the masking did to the ranks.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::microdata::{
    rank_attribute, reorder_column, ColumnData, Dataset, PairedDatasets, RankDirection, Ranking,
};

/// A bijection on row indices. `image[i]` (0-based) is the original row
/// whose value lands at row `i` of the reverse-mapped dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// Build from a 0-based image sequence, validating bijectivity.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &j in &image {
            if j >= n || seen[j] {
                return Err(Error::NotBijective(n));
            }
            seen[j] = true;
        }
        Ok(Self { image })
    }

    /// Build from the 1-based image sequence used in text formats.
    pub fn from_image_one_based(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let zero_based: Vec<usize> = image
            .into_iter()
            .map(|j| j.checked_sub(1).ok_or(Error::NotBijective(n)))
            .collect::<Result<_>>()?;
        Self::from_image(zero_based)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn image_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|&j| j + 1).collect()
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// Reorder `values`: `out[i] = values[image[i]]`.
    pub fn apply<T: Clone>(&self, values: &[T]) -> Vec<T> {
        assert_eq!(values.len(), self.len(), "permutation length mismatch");
        self.image.iter().map(|&j| values[j].clone()).collect()
    }

    pub fn fixed_points(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i == j)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.fixed_points() == self.len()
    }

    /// Signed rank displacement of every row: how far the matrix view's 1
    /// moved within its column relative to the identity (down positive,
    /// up negative). Entry `j` is `inverse(j) - j`.
    pub fn rank_displacements(&self) -> Vec<i64> {
        let inv = self.inverse();
        inv.image()
            .iter()
            .enumerate()
            .map(|(j, &i)| i as i64 - j as i64)
            .collect()
    }

    pub fn to_matrix(&self) -> PermutationMatrix {
        PermutationMatrix {
            image: self.image.clone(),
        }
    }
}

/// Dense 0/1 view of a permutation: exactly one 1 per row and per column,
/// with the 1 of row `i` in column `image[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMatrix {
    image: Vec<usize>,
}

impl PermutationMatrix {
    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        u8::from(self.image[row] == col)
    }

    /// Number of 1s on the diagonal, i.e. fixed points.
    pub fn trace(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i == j)
            .count()
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

impl fmt::Display for PermutationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            let row: Vec<String> = (0..self.n())
                .map(|j| self.entry(i, j).to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Per-record signed rank displacements of one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementVector {
    attribute: String,
    raw: Vec<i64>,
}

impl DisplacementVector {
    pub fn new(attribute: impl Into<String>, raw: Vec<i64>) -> Self {
        Self {
            attribute: attribute.into(),
            raw,
        }
    }

    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    pub fn n(&self) -> usize {
        self.raw.len()
    }

    pub fn zero_count(&self) -> usize {
        self.raw.iter().filter(|r| **r == 0).count()
    }

    /// Absolute displacements with zeros replaced by `epsilon`, the form
    /// consumed by the risk measures.
    pub fn epsilonized(&self, epsilon: f64) -> Result<Vec<f64>> {
        epsilonize(self, epsilon)
    }
}

/// Extract the permutation that carries the original ranking onto the
/// masked one: `image[i]` is the original row whose rank equals the masked
/// rank at row `i`.
pub fn extract_permutation(rank_x: &Ranking, rank_y: &Ranking) -> Result<Permutation> {
    if rank_x.direction() != rank_y.direction() {
        return Err(Error::DirectionMismatch);
    }
    if rank_x.n() != rank_y.n() {
        return Err(Error::LengthMismatch {
            a: rank_x.n(),
            b: rank_y.n(),
        });
    }
    let rows_by_rank = rank_x.rows_by_rank();
    let image = rank_y
        .ranks()
        .iter()
        .map(|&r| rows_by_rank[r - 1])
        .collect();
    Ok(Permutation { image })
}

/// Rank displacements labelled with their attribute.
pub fn displacement_vector(perm: &Permutation, attribute: impl Into<String>) -> DisplacementVector {
    DisplacementVector::new(attribute, perm.rank_displacements())
}

/// Absolute displacements with zeros replaced by a small positive value so
/// that negative-exponent power means are defined.
pub fn epsilonize(d: &DisplacementVector, epsilon: f64) -> Result<Vec<f64>> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::BadEpsilon(epsilon));
    }
    Ok(d.raw()
        .iter()
        .map(|&r| {
            if r == 0 {
                epsilon
            } else {
                r.unsigned_abs() as f64
            }
        })
        .collect())
}

/// Residuals of one attribute: numeric differences where subtraction is
/// defined, otherwise a per-row changed/unchanged flag.
#[derive(Debug, Clone, PartialEq)]
pub enum ResidualColumn {
    Numeric(Vec<f64>),
    /// `true` where the masked value equals the reverse-mapped value.
    Ordered(Vec<bool>),
}

impl ResidualColumn {
    pub fn cell_text(&self, row: usize) -> String {
        match self {
            ResidualColumn::Numeric(v) => format!("{}", v[row]),
            ResidualColumn::Ordered(same) => {
                if same[row] {
                    "same".into()
                } else {
                    "different".into()
                }
            }
        }
    }
}

/// Outcome of [`reverse_map`]: Z, E, and per-attribute permutations,
/// displacements and rankings.
#[derive(Debug, Clone)]
pub struct Decomposition {
    z: Dataset,
    residuals: Vec<ResidualColumn>,
    permutations: Vec<Permutation>,
    displacements: Vec<DisplacementVector>,
    original_rankings: Vec<Ranking>,
    masked_rankings: Vec<Ranking>,
}

impl Decomposition {
    /// The reverse-mapped dataset: original values, masked rank order.
    pub fn z(&self) -> &Dataset {
        &self.z
    }

    pub fn residuals(&self) -> &[ResidualColumn] {
        &self.residuals
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.permutations
    }

    pub fn displacements(&self) -> &[DisplacementVector] {
        &self.displacements
    }

    pub fn original_rankings(&self) -> &[Ranking] {
        &self.original_rankings
    }

    pub fn masked_rankings(&self) -> &[Ranking] {
        &self.masked_rankings
    }

    /// Residuals in the delimited dataset format ("same"/"different" for
    /// ordered attributes).
    pub fn residuals_to_csv(&self) -> String {
        let names: Vec<&str> = self.z.column_names();
        let mut out = String::new();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.z.n() {
            let cells: Vec<String> = self.residuals.iter().map(|r| r.cell_text(row)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One line per attribute: `name: i1 i2 ... in` (1-based image).
    pub fn permutations_to_text(&self) -> String {
        let mut out = String::new();
        for (col, perm) in self.z.columns().iter().zip(&self.permutations) {
            let image: Vec<String> = perm
                .image_one_based()
                .iter()
                .map(|i| i.to_string())
                .collect();
            out.push_str(&format!("{}: {}\n", col.name(), image.join(" ")));
        }
        out
    }

    /// Dense 0/1 grids, one block per attribute. Debug aid.
    pub fn matrices_to_text(&self) -> String {
        let mut out = String::new();
        for (col, perm) in self.z.columns().iter().zip(&self.permutations) {
            out.push_str(&format!("{}\n{}", col.name(), perm.to_matrix()));
        }
        out
    }
}

/// Decompose a dataset pair into Z, E and per-attribute permutations.
///
/// Attributes are processed independently and in parallel; the result is
/// identical to sequential evaluation.
pub fn reverse_map(pair: &PairedDatasets, direction: RankDirection) -> Decomposition {
    struct PerColumn {
        z: crate::microdata::AttributeColumn,
        residual: ResidualColumn,
        perm: Permutation,
        displacement: DisplacementVector,
        rank_x: Ranking,
        rank_y: Ranking,
    }

    let columns: Vec<PerColumn> = pair
        .original()
        .columns()
        .par_iter()
        .zip(pair.masked().columns().par_iter())
        .map(|(x_col, y_col)| {
            let rank_x = rank_attribute(x_col, direction);
            let rank_y = rank_attribute(y_col, direction);
            let perm = extract_permutation(&rank_x, &rank_y)
                .expect("paired columns share n and direction");
            let z = reorder_column(x_col, perm.image());
            let residual = match (y_col.data(), z.data()) {
                (ColumnData::Numeric(y), ColumnData::Numeric(z)) => {
                    ResidualColumn::Numeric(y.iter().zip(z).map(|(y, z)| y - z).collect())
                }
                (ColumnData::Ordered { codes: y, .. }, ColumnData::Ordered { codes: z, .. }) => {
                    ResidualColumn::Ordered(y.iter().zip(z).map(|(y, z)| y == z).collect())
                }
                _ => unreachable!("pair validation guarantees matching kinds"),
            };
            let displacement = displacement_vector(&perm, x_col.name());
            PerColumn {
                z,
                residual,
                perm,
                displacement,
                rank_x,
                rank_y,
            }
        })
        .collect();

    let mut z_columns = Vec::with_capacity(columns.len());
    let mut residuals = Vec::with_capacity(columns.len());
    let mut permutations = Vec::with_capacity(columns.len());
    let mut displacements = Vec::with_capacity(columns.len());
    let mut original_rankings = Vec::with_capacity(columns.len());
    let mut masked_rankings = Vec::with_capacity(columns.len());
    for c in columns {
        z_columns.push(c.z);
        residuals.push(c.residual);
        permutations.push(c.perm);
        displacements.push(c.displacement);
        original_rankings.push(c.rank_x);
        masked_rankings.push(c.rank_y);
    }

    let z = pair.original().with_columns(
        format!("{}:reverse-mapped", pair.original().name()),
        z_columns,
    );

    Decomposition {
        z,
        residuals,
        permutations,
        displacements,
        original_rankings,
        masked_rankings,
    }
}

/// Parse a permutation file: one `name: i1 i2 ... in` line per attribute.
pub fn parse_permutation_file(text: &str) -> Result<Vec<(String, Permutation)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (name, rest) = trimmed.split_once(':').ok_or(Error::BadPermutationFile {
            line: line_no,
            message: "expected 'name: i1 i2 ... in'".into(),
        })?;
        let image: Vec<usize> = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::BadPermutationFile {
                    line: line_no,
                    message: format!("'{tok}' is not a positive integer"),
                })
            })
            .collect::<Result<_>>()?;
        let perm =
            Permutation::from_image_one_based(image).map_err(|_| Error::BadPermutationFile {
                line: line_no,
                message: "indices are not a permutation of 1..=n".into(),
            })?;
        out.push((name.trim().to_string(), perm));
    }
    if out.is_empty() {
        return Err(Error::BadPermutationFile {
            line: 0,
            message: "file contains no permutation lines".into(),
        });
    }
    let mut seen = HashSet::new();
    for (name, _) in &out {
        if !seen.insert(name.clone()) {
            return Err(Error::DuplicateColumn(name.clone()));
        }
    }
    Ok(out)
}

/// Render permutations in the same one-line-per-attribute format.
pub fn permutations_to_text(perms: &[(String, Permutation)]) -> String {
    let mut out = String::new();
    for (name, perm) in perms {
        let image: Vec<String> = perm
            .image_one_based()
            .iter()
            .map(|i| i.to_string())
            .collect();
        out.push_str(&format!("{}: {}\n", name, image.join(" ")));
    }
    out
}
