use thiserror::Error;

/// Errors surfaced by the library.
///
/// Every fallible operation distinguishes bad arguments, configured resource
/// ceilings, features that are deliberately out of scope, and quotients whose
/// Hilbert function is not finite.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent arguments (wrong ground set, mismatched
    /// variable tables, out-of-range parameters, unparsable expressions).
    #[error("argument error: {0}")]
    Argument(String),

    /// A configured ceiling was exceeded (enumeration bound, Groebner pair
    /// budget, verification size ceiling). Raise the budget to proceed.
    #[error("resource limit: {0}")]
    Resource(String),

    /// The request is well-formed but outside the supported feature set.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The quotient ring is not finite-dimensional, so ranks by degree do not
    /// terminate: some variable has no pure power among the leading terms.
    #[error("non-Artinian quotient: {0}")]
    NonArtinian(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn non_artinian(msg: impl Into<String>) -> Self {
        Error::NonArtinian(msg.into())
    }
}
