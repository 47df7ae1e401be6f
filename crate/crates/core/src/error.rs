use thiserror::Error;

use crate::poly::NotDivisible;
use crate::scalar::{ParseScalarError, Scalar};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial is not copositive: {0}")]
    NotCopositive(String),

    #[error("degree {0} is too low; at least 2 is required")]
    DegreeTooLow(usize),

    #[error("polynomial has no nonnegative double root")]
    NotBaseBoundary,

    #[error("division left a nonzero remainder {remainder}")]
    NotDivisible { remainder: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("invalid sample spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Parse(#[from] ParseScalarError),

    #[error("malformed json: {0}")]
    Json(String),
}

impl<S: Scalar> From<NotDivisible<S>> for Error {
    fn from(e: NotDivisible<S>) -> Self {
        Error::NotDivisible {
            remainder: e.remainder.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
