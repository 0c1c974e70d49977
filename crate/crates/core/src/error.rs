use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core operations.
///
/// Every variant carries a human-readable message naming the offending
/// field, point or value.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Vector lengths disagree.
    Dimension(String),
    /// A required majorization premise does not hold.
    Order(String),
    /// A parameter is outside its documented range.
    Parameter(String),
    /// An argument is outside the domain of a map (e.g. `log 0`).
    Domain(String),
    /// A numerical routine produced a non-finite value or failed to converge.
    Numeric(String),
    /// A theorem hypothesis failed, so its conclusion may not be tested.
    Precondition(String),
    /// A hypothesis could not be established either way.
    Unverified(String),
    /// An internal postcondition failed. Always a bug.
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Order(_) => "order",
            Error::Parameter(_) => "parameter",
            Error::Domain(_) => "domain",
            Error::Numeric(_) => "numeric",
            Error::Precondition(_) => "precondition",
            Error::Unverified(_) => "unverified",
            Error::Internal(_) => "internal",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Dimension(m)
            | Error::Order(m)
            | Error::Parameter(m)
            | Error::Domain(m)
            | Error::Numeric(m)
            | Error::Precondition(m)
            | Error::Unverified(m)
            | Error::Internal(m) => m,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl core::error::Error for Error {}
