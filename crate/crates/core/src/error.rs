use alloc::string::String;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("leading coefficient is not a unit")]
    NonUnit,
    #[error("coefficient rings differ: {0}")]
    RingMismatch(String),
    #[error("inner series must have positive valuation")]
    NonPositiveValuation,
    #[error("no exact {0}-th root of the leading coefficient")]
    NoRoot(u32),
    #[error("exponent {exponent} of the leading term is not divisible as required")]
    BadExponent { exponent: i64 },
    #[error("U_{p} is undefined on series with ramification {m}")]
    RamifiedU { p: u64, m: u32 },
    #[error("coefficient index {index} lies beyond the truncation order {precision}")]
    Truncated { index: i64, precision: i64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("obstruction at index {index}: {reason}")]
    Obstruction { index: usize, reason: String },
    #[error("validation mismatch: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn pre<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
