use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("composition of differentials is not zero: {0}")]
    CompositionNotZero(String),
    #[error("arity bound exceeded: {0}")]
    ArityBoundExceeded(String),
    #[error("invalid operad morphism: {0}")]
    InvalidMorphism(String),
    #[error("algebra check failed: {0}")]
    AlgebraCheckFailed(String),
    #[error("truncation unsound: {0}")]
    TruncationUnsound(String),
    #[error("algebra is not commutative: {0}")]
    NotCommutative(String),
    #[error("simplicial identity violated: {0}")]
    SimplicialIdentityViolation(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
