//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by ensemble synthesis, analysis and code construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    /// The stored coefficients do not reach far enough to certify a tail bound.
    #[error("insufficient depth: {0}")]
    InsufficientDepth(String),
    /// Fixed-point evaluation lost more precision than the working budget allows.
    #[error("precision exhausted at degree {degree}: relative error bound {bound:e}")]
    PrecisionExhausted { degree: usize, bound: f64 },
    /// A distribution with no mass was supplied.
    #[error("empty degree distribution")]
    EmptyDistribution,
    /// The density-evolution map was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Threshold bisection was started from an invalid bracket.
    #[error("invalid bracket: {0}")]
    BracketInvalid(String),
    /// Graph post-processing did not converge.
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    /// Node counts could not be balanced against socket counts.
    #[error("invalid quantization: {0}")]
    InvalidQuantization(String),
    /// A pilot position carried a nonzero bit.
    #[error("pilot bit {0} is nonzero")]
    PilotViolation(usize),
    /// The decoder met a constraint with no unknowns and odd parity.
    #[error("inconsistent constraint {0}")]
    Inconsistency(usize),
    /// A graph file could not be parsed.
    #[error("graph parse error on line {line}: {message}")]
    GraphParse { line: usize, message: String },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("{p} is not in (0, 1)")))
    }
}
