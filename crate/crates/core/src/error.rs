use thiserror::Error;

/// Failure modes shared by every module.
///
/// The CLI maps these onto process exit codes, so the variants are kept
/// coarse: a caller should be able to tell "bad input" apart from "a checked
/// inequality failed" apart from "ran out of budget" apart from "could not
/// decide with the available precision".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the operation's domain (n <= 0, base < 2, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration cap, node budget or term cap would be exceeded.
    #[error("resource limit: {what} requires {requested}, limit is {limit}")]
    ResourceLimit {
        what: String,
        requested: String,
        limit: String,
    },

    /// A comparison on an approximate value could not be decided inside its
    /// error radius.
    #[error("indeterminate comparison: {0}")]
    Indeterminate(String),

    /// A hypothesis required by the operation fails; carries the least
    /// violating element.
    #[error("hypothesis violated at x = {counterexample}: {detail}")]
    HypothesisViolation { counterexample: String, detail: String },

    /// A proven invariant did not hold. This is never expected and
    /// always carries a witness.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// An intermediate integer left the supported range.
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn indeterminate(msg: impl Into<String>) -> Self {
        Error::Indeterminate(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }

    pub(crate) fn limit(
        what: impl Into<String>,
        requested: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            requested: requested.to_string(),
            limit: limit.to_string(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) | Error::HypothesisViolation { .. } => 2,
            Error::ResourceLimit { .. } | Error::Overflow(_) => 3,
            Error::Indeterminate(_) => 4,
            Error::Domain(_) | Error::Parse(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
