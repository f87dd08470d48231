use thiserror::Error;

use crate::scalar::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixed-field arithmetic: {0} and {1}")]
    FieldMismatch(Field, Field),

    #[error("operands live in different ambient algebras")]
    AmbientMismatch,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("degree mismatch for {what}: expected {expected}, found {found}")]
    DegreeMismatch { what: String, expected: u32, found: String },

    #[error("polynomial is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("parse error in `{input}` at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },

    #[error("degree {degree} exceeds the degree bound {bound}")]
    DegreeBoundExceeded { degree: u32, bound: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("coefficient {0} has a denominator divisible by {1}")]
    NotIntegral(String, u64),

    #[error("model is not pure: {0}")]
    NotPure(String),

    #[error("model is not minimal: d({0}) has a linear part")]
    NotMinimal(String),

    #[error("invalid Sullivan model: {0}")]
    InvalidModel(String),

    #[error("polynomial is not symmetric: {0}")]
    NonSymmetric(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no admissible prime for m = {0}")]
    NoAdmissiblePrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not implemented: {0}")]
    NotImplemented(String),

    #[error("catalog: {0}")]
    Catalog(String),

    #[error("catalog schema: {0}")]
    Schema(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
