use thiserror::Error;

/// Errors raised by the exact kernels and the scene layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{operation} is not supported in dimension {dim} (limit {limit})")]
    UnsupportedDimension {
        operation: &'static str,
        dim: usize,
        limit: usize,
    },

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("minimal time is infinite at the query point")]
    InfiniteTime,

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("not supported: {0}")]
    Unsupported(String),

    #[error("scene error at `{path}`: {message}")]
    Scene { path: String, message: String },
}

impl Error {
    pub(crate) fn dims(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }

    pub(crate) fn scene(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Scene {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
