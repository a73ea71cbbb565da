use thiserror::Error;

use crate::protocol::{AuditError, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error("source protocol is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("source protocol is not exact")]
    NotExact,
    #[error("claims violated: {0}")]
    ClaimsViolated(String),
    #[error("not private: {0}")]
    NotPrivate(AuditError),
    #[error("{what} = {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("wrong source kind: expected {0}")]
    WrongKind(&'static str),
    #[error("malformed circuit: {0}")]
    Circuit(String),
}

pub(crate) fn ensure(what: &'static str, size: usize, limit: usize) -> Result<(), CompileError> {
    if size > limit {
        Err(CompileError::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}
