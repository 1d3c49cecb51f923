use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter {0} outside [0, 1]")]
    ParameterRange(f64),

    #[error("out of gamut: {0}")]
    OutOfGamut(String),

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("range error: {0}")]
    Range(String),

    #[error("invalid operation: {0}")]
    InvalidOperation(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("png encoding failed: {0}")]
    Png(#[from] png::EncodingError),
}

pub type Result<T> = std::result::Result<T, Error>;
