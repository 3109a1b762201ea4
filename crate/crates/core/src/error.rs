use thiserror::Error;

use crate::arith::Natural;

pub type Result<T> = std::result::Result<T, MidyError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidyError {
    /// The input lies outside the domain of the operation (zero modulus,
    /// valuation of zero, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The inputs are valid but the hypothesis of the characterization
    /// being evaluated is not satisfied.
    #[error("hypothesis not applicable: {0}")]
    HypothesisNotApplicable(String),

    /// A bounded search ran out of candidates.
    #[error("search exhausted: no witness found within bound {bound}")]
    SearchExhausted { bound: Natural },

    /// An intermediate value does not fit in 128 bits.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl MidyError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        MidyError::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        MidyError::Precondition(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        MidyError::Overflow(msg.into())
    }
}
