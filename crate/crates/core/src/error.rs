//! Error type shared by every module.

use thiserror::Error;

/// Failures of library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = 2 is not supported by {0}")]
    PrimeTwo(&'static str),
    #[error("singular quadratic form")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("division by the zero function")]
    DivisionByZero,
    #[error("pole at the evaluation point")]
    Pole,
    #[error("inconsistent samples: {0}")]
    Inconsistent(String),
    #[error("size guard exceeded: {work} residue operations requested, limit {limit} (raise REPDENSE_SIZE_GUARD)")]
    SizeGuard { work: u128, limit: u128 },
    #[error("value did not stabilize: {0}")]
    NotStabilized(String),
    #[error("lattice family not covered by a closed form: {0}")]
    NotCovered(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("identity failed: {0}")]
    Identity(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Default enumeration limit in residue operations.
pub const DEFAULT_SIZE_GUARD: u128 = 200_000_000;

/// Current enumeration limit, read from `REPDENSE_SIZE_GUARD` when set.
pub fn size_guard() -> u128 {
    std::env::var("REPDENSE_SIZE_GUARD")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_GUARD)
}

/// Fails with [`Error::SizeGuard`] when `work` exceeds the current limit.
pub fn check_guard(work: u128) -> Result<()> {
    let limit = size_guard();
    if work > limit {
        Err(Error::SizeGuard { work, limit })
    } else {
        Ok(())
    }
}
