use thiserror::Error;

/// Errors raised by the library.
///
/// Validation problems that are reported rather than raised (instance and
/// allocation invariants) live in [`crate::model::Violation`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration of {needed} configurations exceeds cap {cap}")]
    Capacity { needed: u128, cap: u128 },
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    /// An internal guarantee of an algorithm failed to hold at runtime.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

/// Checks that `base^exp` stays within `cap`, returning the count on success.
pub(crate) fn check_cap(base: usize, exp: usize, cap: u128) -> Result<u128> {
    let mut needed: u128 = 1;
    for _ in 0..exp {
        needed = needed.saturating_mul(base as u128);
        if needed > cap {
            return Err(Error::Capacity { needed, cap });
        }
    }
    Ok(needed)
}
