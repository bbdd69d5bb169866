//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read '{path}': {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column '{column}': cannot parse '{value}' as {expected}")]
    BadCell {
        row: usize,
        column: String,
        value: String,
        expected: String,
    },

    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),

    #[error("dataset '{name}' has {n} data rows; at least 2 are required")]
    TooFewRecords { name: String, n: usize },

    #[error("dataset '{0}' has no columns")]
    NoColumns(String),

    #[error("directive names unknown column '{0}'")]
    UnknownDirectiveColumn(String),

    #[error("malformed directive line '{0}'")]
    BadDirective(String),

    #[error("datasets '{a}' ({a_n}x{a_p}) and '{b}' ({b_n}x{b_p}) differ in shape")]
    ShapeMismatch {
        a: String,
        a_n: usize,
        a_p: usize,
        b: String,
        b_n: usize,
        b_p: usize,
    },

    #[error("column {index} is named '{a}' in one dataset and '{b}' in the other")]
    ColumnNameMismatch { index: usize, a: String, b: String },

    #[error("column '{0}' has incompatible value types across the pair")]
    ColumnKindMismatch(String),

    #[error("rankings use different directions")]
    DirectionMismatch,

    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },

    #[error("sequence is not a permutation of 1..={0}")]
    NotBijective(usize),

    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),

    #[error("power mean of an empty sequence is undefined")]
    EmptyInput,

    #[error("power mean requires strictly positive values, got {0}")]
    NonPositiveValue(f64),

    #[error("risk aversion exponent must be <= 1 (or -inf), got {0}")]
    RiskExponentOutOfRange(f64),

    #[error("information-loss aversion exponent must be >= 1 (or +inf), got {0}")]
    InfoExponentOutOfRange(f64),

    #[error("exponent grid has no points")]
    EmptyGrid,

    #[error("relative displacement requires two distinct attributes, got '{0}' twice")]
    SameAttribute(String),

    #[error("attribute pairs must cover every unordered pair exactly once: {0}")]
    PairCoverage(String),

    #[error("cannot compare different attribute pairs: '{a}' vs '{b}'")]
    PairKeyMismatch { a: String, b: String },

    #[error("correlation requires at least 2 records, got {0}")]
    TooFewForCorrelation(usize),

    #[error("normalization requires at least 2 records, got {0}")]
    NormalizeTooFew(usize),

    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),

    #[error("column '{0}' is not numeric")]
    NonNumericColumn(String),

    #[error("standard deviation for column '{column}' must be finite and >= 0, got {value}")]
    BadSigma { column: String, value: f64 },

    #[error("block specification is not a partition of the attributes: {0}")]
    BadPartition(String),

    #[error("row index {index} out of range for {n} records")]
    RowOutOfRange { index: usize, n: usize },

    #[error("displacement bound {dmax} out of range 0..={max}")]
    BadDisplacementBound { dmax: usize, max: usize },

    #[error("permutation file line {line}: {message}")]
    BadPermutationFile { line: usize, message: String },
}
