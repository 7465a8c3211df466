use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("dimension {dim} is not supported (maximum {max})")]
    UnsupportedDimension { dim: usize, max: usize },

    #[error("capacity exceeded for {what}: needs {needed}, cap is {cap}")]
    Capacity { what: &'static str, needed: u128, cap: u128 },

    #[error("no cover: {len} points cannot be covered by {n} single-point translates")]
    NoCover { len: usize, n: u64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("point generation failed: {0}")]
    Generation(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("exact comparison did not resolve: {0}")]
    Precision(String),

    #[error("record failed verification: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, needed: u128, cap: u128) -> Self {
        Error::Capacity { what, needed, cap }
    }
}
