use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by library operations.
///
/// Cap-related variants are "inconclusive" rather than "invalid": the caller
/// may raise the cap and retry.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid slope set: {0}")]
    InvalidSlopeSet(String),
    #[error("value {0} lies outside [0, 1]")]
    OutOfUnit(Rational),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval {
        lo: Box<Rational>,
        hi: Box<Rational>,
    },
    #[error("interval count {count} exceeds cap {cap} at step {step}")]
    IntervalCap {
        cap: usize,
        count: usize,
        step: usize,
    },
    #[error("set is empty")]
    EmptySet,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("points have different sidedness")]
    SidednessMismatch,
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("enumeration of {needed} items exceeds cap {cap}")]
    EnumerationCap { cap: usize, needed: usize },
    #[error("specification segments too close: gap {gap} between segments {segment} and {next} is below required spacing {required}")]
    Spacing {
        segment: usize,
        next: usize,
        gap: i64,
        required: usize,
    },
    #[error("invalid specification: {0}")]
    InvalidSpecification(String),
    #[error("connector search exhausted: {0}")]
    ConnectorExhausted(String),
    #[error("index {index} not covered by point")]
    IndexOutOfRange { index: i64 },
    #[error("distance bound undecidable: [{lower}, {upper}] straddles {threshold}")]
    Undecidable {
        lower: Box<Rational>,
        upper: Box<Rational>,
        threshold: Box<Rational>,
    },
    #[error("branch cap {cap} exceeded")]
    BranchCap { cap: usize },
    #[error("slope set is not closed under reciprocals")]
    NotReciprocalClosed,
}

impl Error {
    /// True for errors that signal an exhausted resource budget rather than bad input.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::IntervalCap { .. }
                | Error::EnumerationCap { .. }
                | Error::BranchCap { .. }
                | Error::Undecidable { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
