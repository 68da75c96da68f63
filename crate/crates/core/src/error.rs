use thiserror::Error;

use crate::dsl::ParseError;

/// Errors raised by the engine, the oracle and the sweep runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("kets mix Fock and coherent slots")]
    KindMismatch,

    #[error("mode index {index} out of range for {modes} modes")]
    InvalidMode { index: usize, modes: usize },

    #[error("missing parameters for {family}: expected {expected} slot values, found {found}")]
    MissingParameters {
        family: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("truncation guard violated: {0}")]
    Guard(String),

    #[error("invalid sweep configuration [{code}]: {message}")]
    Config { code: &'static str, message: String },

    #[error("ensemble cannot be rendered as a state expression: {0}")]
    NotRepresentable(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn config(code: &'static str, message: impl Into<String>) -> Self {
        Error::Config {
            code,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
