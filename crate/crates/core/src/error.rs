//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into user errors (malformed input), resource errors
/// (budget exhaustion) and invariant violations (which signal a bug, not bad
/// input).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("quiver has a directed cycle")]
    Cycle,
    #[error("quiver is not connected")]
    Disconnected,
    #[error("underlying graph is not an ADE Dynkin tree: {0}")]
    NotDynkin(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("resolution degenerate: indecomposable {0} is projective")]
    ProjectiveResolution(String),
    #[error("enumeration budget of {budget} nodes exceeded (partial count {partial})")]
    BudgetExceeded { budget: u64, partial: u64 },
    #[error("not polynomial-count at sampled degree: {0}")]
    NotPolynomialCount(String),
    #[error("not a subrepresentation: {0}")]
    NotSubrepresentation(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed user input.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::Malformed(_)
                | Error::Cycle
                | Error::Disconnected
                | Error::NotDynkin(_)
                | Error::DimensionMismatch(_)
                | Error::FieldMismatch(..)
                | Error::ProjectiveResolution(_)
                | Error::NotSubrepresentation(_)
                | Error::OutOfRange(_)
        )
    }
}

/// Returns an invariant-violation error unless `cond` holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::Error::Invariant(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure;
