use thiserror::Error;

use crate::linalg::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown object '{0}'")]
    UnknownObject(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("not invertible in H^0 at object '{0}'")]
    NotInvertible(String),
    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown document version {0}")]
    UnknownVersion(u64),
    #[error("dangling reference '{0}'")]
    DanglingReference(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
