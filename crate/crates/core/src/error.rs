use thiserror::Error;

/// Errors raised by the form calculus, the positivity tests and the
/// verification drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("bidegree mismatch: {0}")]
    Degree(String),

    #[error("reference form is not Kähler (not positive definite): {0}")]
    NotKahler(String),

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
