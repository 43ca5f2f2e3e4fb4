use thiserror::Error;

use crate::syntax::Var;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("term is not closed: free variable {0}")]
    Open(Var),
    #[error("projected variable out of range: {0}")]
    NormOutOfRange(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("substitution for a non-value")]
    NotAValue,
    #[error("unbound variable {0}")]
    Unbound(Var),
    #[error("ill-formed term: {0}")]
    IllFormed(String),
    #[error("term is not prime")]
    NotPrime,
    #[error("machine invariant violated: {0}")]
    Invariant(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
