use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the quaternion kernels, the solver and the data pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
