//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operator or state was used with a basis it was not built over.
    BasisMismatch {
        expected: String,
        found: String,
    },
    /// Parameters outside the supported domain (cutoffs, counts, rates).
    InvalidParameter(String),
    /// The requested operation is undefined for this representation.
    Unsupported(String),
    /// A numerical procedure failed to reach its advertised accuracy.
    Numerical(String),
    /// Evolution produced a non-finite matrix entry at time `t`.
    NonFinite {
        t: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BasisMismatch { expected, found } => {
                write!(f, "basis mismatch: operator built over {expected}, applied to {found}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported operation: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            Error::NonFinite { t } => {
                write!(f, "non-finite density-matrix entry at t = {t}; reduce the step size")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
