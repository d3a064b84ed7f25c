use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unknown label {0}")]
    UnknownLabel(usize),
    #[error("division leaves a nonzero remainder")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("power series precondition violated: {0}")]
    Series(&'static str),
    #[error("no value assigned to variable {0}")]
    MissingVariable(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("{what} of {size} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("invalid tree or forest: {0}")]
    InvalidTree(String),
    #[error("invalid edge ordering: {0}")]
    InvalidOrdering(String),
    #[error("{0}")]
    Precondition(String),
    #[error("identity violated in {check}: {witness}")]
    Violation { check: &'static str, witness: String },
}

impl Error {
    /// True when the error reports a failed identity rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::Violation { .. } | Error::InexactDivision)
    }

    pub(crate) fn violation(check: &'static str, witness: impl Into<String>) -> Self {
        Error::Violation {
            check,
            witness: witness.into(),
        }
    }
}
