use thiserror::Error;

use crate::object::BackendKind;

pub type Result<T, E = CatError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatError {
    #[error("backend mismatch: {left:?} vs {right:?}")]
    BackendMismatch {
        left: BackendKind,
        right: BackendKind,
    },
    #[error("morphisms are not composable: codomain `{cod}` differs from domain `{dom}`")]
    CompositionMismatch { cod: String, dom: String },
    #[error("cospan legs have different codomains: `{left}` vs `{right}`")]
    CospanMismatch { left: String, right: String },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("object `{name}` has {size} elements, exceeding the bound {bound}")]
    BoundExceeded {
        name: String,
        size: usize,
        bound: usize,
    },
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("condition {condition} failed: {detail}")]
    ConditionFailed { condition: String, detail: String },
    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
    #[error("malformed input at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl CatError {
    pub fn precondition(msg: impl Into<String>) -> Self {
        CatError::PreconditionViolation(msg.into())
    }
}
