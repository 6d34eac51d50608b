//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An operation was called with arguments outside its contract
    /// (dimension mismatch, point outside the ball, norm below the cone
    /// threshold, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A data file could not be parsed.
    #[error("{path}:{line}: parse error: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Invalid or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Filtering removed every interaction or triplet.
    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    /// A checkpoint does not match the dataset or model shape.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A gradient or loss became NaN/Inf during training.
    #[error("non-finite value in {tensor}")]
    NonFinite { tensor: &'static str },

    /// No user had a non-empty test set.
    #[error("no evaluable users: {0}")]
    NoEvaluableUsers(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
