use thiserror::Error;

/// Errors raised by matrix construction, scaling runs and closed-form evaluation.
///
/// Matrix coordinates in messages are 1-based `(row, col)`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("matrix has no entries")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row},{col}) is not positive")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("diagonal coordinate {index} is not positive")]
    NonPositiveDiagonal { index: usize },
    #[error("{which} target {index} is not positive")]
    NonPositiveTarget { which: &'static str, index: usize },
    #[error("row targets sum to {rows} but column targets sum to {cols}")]
    UnequalTotals { rows: String, cols: String },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{context} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("termination classification is decided for 2x2 matrices only, got {rows}x{cols}; finite termination for n >= 3 is an open problem")]
    NotTwoByTwo { rows: usize, cols: usize },
    #[error("exact arithmetic requires tolerance 0, got {0}")]
    InexactTolerance(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("cannot parse entry {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("matrix mixes numeric and rational-string entries")]
    MixedEntries,
    #[error("enumeration of {requested} candidates exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u128 },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, ScalingError>;
