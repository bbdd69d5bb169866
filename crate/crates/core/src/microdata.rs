//! Ingestion, validation and ranking of paired original/masked datasets.
//!
//! A [`Dataset`] is a named table of `n` records over `p` attributes whose
//! values are totally ordered: real numbers, or categories with a declared
//! level order. Every attribute can therefore be ranked, which is the only
//! requirement the rest of the crate places on the data.
//!
//! The text format is comma-separated with a header row. Ordered categories
//! are declared by a directive line placed before the header:
//!
//! ```text
//! #ordered:size=small<medium<large
//! id,size
//! 1,small
//! 2,large
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values of one attribute, homogeneous per column.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    /// Finite real numbers.
    Numeric(Vec<f64>),
    /// Ordered categories stored as indices into `levels` (ascending order).
    Ordered {
        levels: Vec<String>,
        codes: Vec<usize>,
    },
}

impl ColumnData {
    pub fn len(&self) -> usize {
        match self {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Ordered { codes, .. } => codes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, ColumnData::Numeric(_))
    }

    /// Ascending comparison of the values at rows `i` and `j`.
    pub fn cmp_rows(&self, i: usize, j: usize) -> Ordering {
        match self {
            // Values are validated finite on construction, so a total
            // order exists.
            ColumnData::Numeric(v) => v[i].partial_cmp(&v[j]).expect("finite values"),
            ColumnData::Ordered { codes, .. } => codes[i].cmp(&codes[j]),
        }
    }

    /// The cell at `row` rendered exactly as it is written to file.
    pub fn cell_text(&self, row: usize) -> String {
        match self {
            ColumnData::Numeric(v) => format!("{}", v[row]),
            ColumnData::Ordered { levels, codes } => levels[codes[row]].clone(),
        }
    }

    fn reordered(&self, take: impl Fn(usize) -> usize, n: usize) -> ColumnData {
        match self {
            ColumnData::Numeric(v) => ColumnData::Numeric((0..n).map(|i| v[take(i)]).collect()),
            ColumnData::Ordered { levels, codes } => ColumnData::Ordered {
                levels: levels.clone(),
                codes: (0..n).map(|i| codes[take(i)]).collect(),
            },
        }
    }
}

/// One named attribute and its values.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeColumn {
    name: String,
    data: ColumnData,
}

impl AttributeColumn {
    /// A numeric column. Every value must be finite.
    pub fn numeric(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::BadCell {
                row: values.iter().position(|v| !v.is_finite()).unwrap() + 1,
                column: name,
                value: format!("{bad}"),
                expected: "a finite number".into(),
            });
        }
        Ok(Self {
            name,
            data: ColumnData::Numeric(values),
        })
    }

    /// An ordered-categorical column; `values` must all appear in `levels`.
    pub fn ordered(
        name: impl Into<String>,
        levels: Vec<String>,
        values: &[String],
    ) -> Result<Self> {
        let name = name.into();
        let mut codes = Vec::with_capacity(values.len());
        for (row, v) in values.iter().enumerate() {
            match levels.iter().position(|l| l == v) {
                Some(code) => codes.push(code),
                None => {
                    return Err(Error::BadCell {
                        row: row + 1,
                        column: name,
                        value: v.clone(),
                        expected: format!("one of the declared levels {levels:?}"),
                    })
                }
            }
        }
        Ok(Self {
            name,
            data: ColumnData::Ordered { levels, codes },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Numeric values, or an error for ordered columns.
    pub fn numeric_values(&self) -> Result<&[f64]> {
        match &self.data {
            ColumnData::Numeric(v) => Ok(v),
            ColumnData::Ordered { .. } => Err(Error::NonNumericColumn(self.name.clone())),
        }
    }

    pub(crate) fn with_data(&self, data: ColumnData) -> AttributeColumn {
        AttributeColumn {
            name: self.name.clone(),
            data,
        }
    }
}

/// A named table of `n >= 2` records over `p >= 1` rankable attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    columns: Vec<AttributeColumn>,
    n: usize,
}

impl Dataset {
    pub fn new(name: impl Into<String>, columns: Vec<AttributeColumn>) -> Result<Self> {
        let name = name.into();
        if columns.is_empty() {
            return Err(Error::NoColumns(name));
        }
        let n = columns[0].len();
        for c in &columns[1..] {
            if c.len() != n {
                return Err(Error::LengthMismatch { a: n, b: c.len() });
            }
        }
        if n < 2 {
            return Err(Error::TooFewRecords { name, n });
        }
        let mut seen = std::collections::HashSet::new();
        for c in &columns {
            if !seen.insert(c.name().to_string()) {
                return Err(Error::DuplicateColumn(c.name().to_string()));
            }
        }
        Ok(Self { name, columns, n })
    }

    /// Parse the delimited text format. `name` labels the dataset in
    /// reports and error messages.
    pub fn from_str(text: &str, name: impl Into<String>) -> Result<Self> {
        parse_dataset(text, name.into())
    }

    pub fn from_reader(mut reader: impl Read, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|source| Error::Io {
                path: name.clone(),
                source,
            })?;
        parse_dataset(&text, name)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        parse_dataset(&text, path.display().to_string())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[AttributeColumn] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&AttributeColumn> {
        self.columns.iter().find(|c| c.name() == name)
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name()).collect()
    }

    pub(crate) fn with_columns(
        &self,
        name: impl Into<String>,
        columns: Vec<AttributeColumn>,
    ) -> Dataset {
        Dataset {
            name: name.into(),
            n: columns[0].len(),
            columns,
        }
    }

    /// Render in the same delimited format the parser accepts, including
    /// level-order directives for ordered columns.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for c in &self.columns {
            if let ColumnData::Ordered { levels, .. } = c.data() {
                out.push_str(&format!("#ordered:{}={}\n", c.name(), levels.join("<")));
            }
        }
        out.push_str(&self.column_names().join(","));
        out.push('\n');
        for row in 0..self.n {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|c| c.data().cell_text(row))
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Which extreme receives rank 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RankDirection {
    /// Rank 1 is the largest value.
    #[default]
    Descending,
    /// Rank 1 is the smallest value.
    Ascending,
}

impl fmt::Display for RankDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankDirection::Descending => write!(f, "descending"),
            RankDirection::Ascending => write!(f, "ascending"),
        }
    }
}

/// A bijective assignment of ranks `1..=n` to one attribute's records.
///
/// Ties are broken by row order (the earlier row gets the better rank) so
/// that the ranks always form a bijection; `tie_groups` counts how many
/// groups of equal values were encountered, letting callers surface when
/// tie-breaking influenced downstream results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    attribute: String,
    ranks: Vec<usize>,
    direction: RankDirection,
    tie_groups: usize,
}

impl Ranking {
    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    /// Rank of each row, 1-based, a bijection onto `1..=n`.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn direction(&self) -> RankDirection {
        self.direction
    }

    pub fn tie_groups(&self) -> usize {
        self.tie_groups
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    /// Row index (0-based) holding each rank: `out[r-1]` is the row with rank `r`.
    pub fn rows_by_rank(&self) -> Vec<usize> {
        let mut rows = vec![0; self.ranks.len()];
        for (row, &rank) in self.ranks.iter().enumerate() {
            rows[rank - 1] = row;
        }
        rows
    }
}

/// Rank one attribute. Total on valid columns: ties are resolved by row
/// order, so the result is always a bijection.
pub fn rank_attribute(column: &AttributeColumn, direction: RankDirection) -> Ranking {
    let n = column.len();
    let data = column.data();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: tied rows keep their original order, which implements
    // the stable-by-row tie policy for both directions.
    order.sort_by(|&a, &b| match direction {
        RankDirection::Descending => data.cmp_rows(b, a),
        RankDirection::Ascending => data.cmp_rows(a, b),
    });

    let mut ranks = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        ranks[row] = pos + 1;
    }

    let mut tie_groups = 0;
    let mut in_group = false;
    for w in order.windows(2) {
        if data.cmp_rows(w[0], w[1]) == Ordering::Equal {
            if !in_group {
                tie_groups += 1;
                in_group = true;
            }
        } else {
            in_group = false;
        }
    }

    Ranking {
        attribute: column.name().to_string(),
        ranks,
        direction,
        tie_groups,
    }
}

/// A validated original/masked dataset pair: same shape, same column names
/// in the same order, compatible column types.
#[derive(Debug, Clone)]
pub struct PairedDatasets {
    original: Dataset,
    masked: Dataset,
}

impl PairedDatasets {
    pub fn new(original: Dataset, masked: Dataset) -> Result<Self> {
        if original.n() != masked.n() || original.p() != masked.p() {
            return Err(Error::ShapeMismatch {
                a: original.name().to_string(),
                a_n: original.n(),
                a_p: original.p(),
                b: masked.name().to_string(),
                b_n: masked.n(),
                b_p: masked.p(),
            });
        }
        for (index, (a, b)) in original.columns().iter().zip(masked.columns()).enumerate() {
            if a.name() != b.name() {
                return Err(Error::ColumnNameMismatch {
                    index: index + 1,
                    a: a.name().to_string(),
                    b: b.name().to_string(),
                });
            }
            let compatible = match (a.data(), b.data()) {
                (ColumnData::Numeric(_), ColumnData::Numeric(_)) => true,
                (
                    ColumnData::Ordered { levels: la, .. },
                    ColumnData::Ordered { levels: lb, .. },
                ) => la == lb,
                _ => false,
            };
            if !compatible {
                return Err(Error::ColumnKindMismatch(a.name().to_string()));
            }
        }
        Ok(Self { original, masked })
    }

    pub fn original(&self) -> &Dataset {
        &self.original
    }

    pub fn masked(&self) -> &Dataset {
        &self.masked
    }

    pub fn n(&self) -> usize {
        self.original.n()
    }

    pub fn p(&self) -> usize {
        self.original.p()
    }
}

fn parse_dataset(text: &str, name: String) -> Result<Dataset> {
    // Leading '#' lines are comments; '#ordered:' lines declare level
    // orders and must precede the header.
    let mut directives: Vec<(String, Vec<String>)> = Vec::new();
    let mut body_start = 0;
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            if let Some(rest) = trimmed.strip_prefix("#ordered:") {
                let (col, spec) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::BadDirective(trimmed.to_string()))?;
                let levels: Vec<String> = spec.split('<').map(|s| s.trim().to_string()).collect();
                if col.trim().is_empty() || levels.iter().any(|l| l.is_empty()) {
                    return Err(Error::BadDirective(trimmed.to_string()));
                }
                directives.push((col.trim().to_string(), levels));
            }
            body_start += line.len() + 1;
        } else {
            break;
        }
    }
    let body = &text[body_start.min(text.len())..];

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(body.as_bytes());

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(e, 0))?
        .iter()
        .map(|h| h.to_string())
        .collect();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::NoColumns(name));
    }
    {
        let mut seen = std::collections::HashSet::new();
        for h in &headers {
            if !seen.insert(h.clone()) {
                return Err(Error::DuplicateColumn(h.clone()));
            }
        }
    }
    for (col, _) in &directives {
        if !headers.contains(col) {
            return Err(Error::UnknownDirectiveColumn(col.clone()));
        }
    }

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(e, row_idx + 1))?;
        if record.len() != headers.len() {
            return Err(Error::RaggedRow {
                row: row_idx + 1,
                expected: headers.len(),
                found: record.len(),
            });
        }
        for (c, field) in record.iter().enumerate() {
            cells[c].push(field.to_string());
        }
    }

    let n = cells[0].len();
    if n < 2 {
        return Err(Error::TooFewRecords { name, n });
    }

    let mut columns = Vec::with_capacity(headers.len());
    for (c, header) in headers.iter().enumerate() {
        let levels = directives
            .iter()
            .find(|(col, _)| col == header)
            .map(|(_, l)| l.clone());
        let column = match levels {
            Some(levels) => AttributeColumn::ordered(header.clone(), levels, &cells[c])?,
            None => {
                let mut values = Vec::with_capacity(n);
                for (row, cell) in cells[c].iter().enumerate() {
                    let parsed: f64 = cell.parse().map_err(|_| Error::BadCell {
                        row: row + 1,
                        column: header.clone(),
                        value: cell.clone(),
                        expected: "a number".into(),
                    })?;
                    if !parsed.is_finite() {
                        return Err(Error::BadCell {
                            row: row + 1,
                            column: header.clone(),
                            value: cell.clone(),
                            expected: "a finite number".into(),
                        });
                    }
                    values.push(parsed);
                }
                AttributeColumn::numeric(header.clone(), values)?
            }
        };
        columns.push(column);
    }

    Dataset::new(name, columns)
}

fn csv_error(e: csv::Error, row: usize) -> Error {
    if let csv::ErrorKind::UnequalLengths {
        expected_len, len, ..
    } = e.kind()
    {
        return Error::RaggedRow {
            row,
            expected: *expected_len as usize,
            found: *len as usize,
        };
    }
    Error::BadCell {
        row,
        column: String::new(),
        value: e.to_string(),
        expected: "a well-formed delimited row".into(),
    }
}

pub(crate) fn reorder_column(column: &AttributeColumn, take_from: &[usize]) -> AttributeColumn {
    let n = take_from.len();
    column.with_data(column.data().reordered(|i| take_from[i], n))
}
