use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A point or parameter lies outside the domain of an operation.
    Domain(String),
    /// Not enough observations for the requested fit.
    InsufficientData(String),
    /// Every EM restart lost positive-definiteness or emptied a component.
    SingularModel(String),
    /// Invalid arguments: empty ranges, unsorted levels, broken invariants.
    Usage(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::InsufficientData(m) => write!(f, "insufficient data: {m}"),
            Error::SingularModel(m) => write!(f, "singular model: {m}"),
            Error::Usage(m) => write!(f, "usage error: {m}"),
        }
    }
}

impl core::error::Error for Error {}
