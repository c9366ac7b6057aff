use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidPmf(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed variable split: {0}")]
    InvalidSplit(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("{what} requires {required} but the configured cap is {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("operation not defined for this attack model: {0}")]
    WrongModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable tag used in machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPmf(_) => "invalid_pmf",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidSplit(_) => "invalid_split",
            Error::OutOfRange(_) => "out_of_range",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::WrongModel(_) => "wrong_model",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
