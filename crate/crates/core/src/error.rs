//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parameter validation and input checking.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an out-of-contract parameter.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An input value was NaN or infinite where a finite number is required.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    /// A noise-component label was neither 0 nor 1.
    #[error("noise label must be 0 or 1, got {0}")]
    Label(u8),
    /// A filter tap file could not be parsed.
    #[error("filter file line {line}: {message}")]
    FilterFile { line: usize, message: String },
    /// I/O failure while reading a filter file.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
