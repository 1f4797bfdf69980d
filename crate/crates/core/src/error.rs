use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: wrong shapes, indices out of range, unknown names.
    #[error("input error: {0}")]
    Input(String),

    /// An operation was asked to run on a structure that lacks what it needs
    /// (a missing table, a missing constant, a source outside the class).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A supplied table disagrees with the order it is attached to.
    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A construction produced something a theorem says is impossible.
    /// These are bugs, never data, so they carry the offending witness.
    #[error("theorem violation: {claim} (witness: {witness})")]
    TheoremViolation { claim: String, witness: String },
}

impl Error {
    pub(crate) fn theorem(claim: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::TheoremViolation {
            claim: claim.into(),
            witness: witness.into(),
        }
    }
}
