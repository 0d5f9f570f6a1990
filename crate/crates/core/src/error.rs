use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigensolver failed to converge (matrix {fingerprint})")]
    NoConvergence { fingerprint: String },

    #[error("degenerate valve step {step}: nothing arrived and nothing extracted")]
    DegenerateStep { step: usize },

    #[error("line {line}: key `{key}`: {reason}")]
    Parse {
        line: usize,
        key: String,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
