use alloc::string::String;
use core::fmt;

/// Errors reported by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    Domain(String),
    /// The request needs more memory than the brute-force regime allows.
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    /// Two operands were built over cubes of different dimensions.
    DimensionMismatch { left: u32, right: u32 },
    /// A recovery procedure ran out of samples before it could decide.
    Inconclusive { samples_used: u64, reason: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Capacity {
                what,
                requested,
                limit,
            } => write!(f, "capacity exceeded: {what} = {requested} (limit {limit})"),
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::Inconclusive {
                samples_used,
                reason,
            } => write!(f, "inconclusive after {samples_used} samples: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
