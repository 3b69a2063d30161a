//! Crate-wide error type.

use std::fmt;

#[derive(Debug)]
pub enum Error {
    /// Vector or matrix dimensions do not match the operator.
    DimensionMismatch { expected: usize, got: usize },
    /// An input contains NaN or infinity.
    NonFinite(&'static str),
    /// A parameter is outside its valid range.
    InvalidParam(String),
    /// The projected matrix is numerically zero; no range basis exists.
    EmptyRange,
    /// Edge-list parsing failed.
    Parse { line: usize, msg: String },
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NonFinite(what) => write!(f, "non-finite entries in {what}"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::EmptyRange => write!(f, "projected matrix is numerically zero"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParam(msg.into())
}
