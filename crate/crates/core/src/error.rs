use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at offset {pos} in {input:?}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("free variable {0} is not declared as a constant")]
    FreeVariable(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("sequent is not a tautology: {0}")]
    NotTautology(String),
    #[error("grammar rejected: {0}")]
    GrammarRejected(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures caused by the caller's data rather than a bug in this crate.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
