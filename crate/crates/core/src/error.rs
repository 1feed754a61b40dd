use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("group tag mismatch: {0}")]
    TagMismatch(String),

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("angle out of range: {0}")]
    AngleRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("singular chart point: {0}")]
    SingularChartPoint(String),

    #[error("numerical resolution too coarse: {0}")]
    NumericalResolution(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a group: {0}")]
    GroupStructure(String),

    #[error("cost cap exceeded: {0}")]
    CostCap(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
