use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined
    /// (or where its guarantee has been proven).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method failed to reach its tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A root search was started on an interval without a sign change.
    #[error("bracket error: f({lo}) = {f_lo} and f({hi}) = {f_hi} have the same sign")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
