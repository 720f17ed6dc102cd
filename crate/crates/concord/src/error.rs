//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no observations")]
    NoObservations,

    #[error("unit '{unit_id}': rating index {index} out of range for {k} categories")]
    RatingOutOfRange {
        unit_id: String,
        index: usize,
        k: usize,
    },

    #[error("category count must be at least 2, got {0}")]
    InvalidCategoryCount(usize),

    #[error("invalid category set: {0}")]
    InvalidCategorySet(String),

    #[error("dimension mismatch: table has {table_k} categories, weights have {weights_k}")]
    DimensionMismatch { table_k: usize, weights_k: usize },

    #[error("invalid weight matrix: {0}")]
    InvalidWeights(String),

    #[error("degenerate marginals: kappa undefined")]
    DegenerateMarginals,

    #[error("coverage level must lie strictly between 0 and 1, got {0}")]
    InvalidLevel(f64),

    #[error("null standard error is zero: significance test undefined")]
    ZeroNullSe,

    #[error("unknown guideline '{0}' (valid: landis_koch, altman, george_mallery, stemler_tsai, fleiss)")]
    UnknownGuideline(String),

    #[error("insufficient groups: need at least {needed}, got {got}")]
    InsufficientGroups { needed: usize, got: usize },

    #[error("invalid group '{label}': {reason}")]
    InvalidGroup { label: String, reason: String },

    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),

    #[error("exceed count {exceed} larger than trial count {trials}")]
    ExceedOverTrials { trials: u64, exceed: u64 },

    #[error("invalid class counts: {0}")]
    InvalidCounts(String),

    #[error("percentile {0} out of range [0, 100]")]
    PercentileOutOfRange(f64),

    #[error("classification index out of range: citation class {citation}, indicator class {indicator} (valid 1..=4)")]
    MatrixIndexOutOfRange { citation: usize, indicator: usize },

    #[error("invalid classification matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid joint distribution: {0}")]
    InvalidJoint(String),

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("ambiguous label '{query}': matches {candidates:?}")]
    AmbiguousLabel {
        query: String,
        candidates: Vec<String>,
    },

    #[error("embedded dataset failed self-validation: {0}")]
    DatasetInvariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
