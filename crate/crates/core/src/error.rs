use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("row indices must be distinct (got {0} twice)")]
    EqualIndices(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not {0}-regular")]
    NotRegular(usize),

    #[error("degenerate degree d={d} for n={n}: {reason}")]
    DegenerateDegree { n: usize, d: usize, reason: &'static str },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent shuffle plan: {0}")]
    InconsistentPlan(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0} is not prime")]
    NotPrime(u64),
}
