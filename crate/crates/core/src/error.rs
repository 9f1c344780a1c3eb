use thiserror::Error;

/// Errors produced by `tschur-core`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation too small: {0}")]
    Truncation(String),
    #[error("series is not invertible: constant term is zero")]
    NotInvertible,
    #[error("series exponential needs a zero constant term")]
    NonzeroConstant,
    #[error("not in the image of the insertion map: {0}")]
    NotInImage(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("computations disagree: {0}")]
    Disagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
