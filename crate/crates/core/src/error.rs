use thiserror::Error;

use crate::root_system::CartanType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported type {0}")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("unknown normalization {0:?}")]
    UnknownNormalization(String),

    #[error("invalid involution: {0}")]
    InvalidInvolution(String),

    #[error("degenerate involution pair: block dimensions {0:?}")]
    DegeneratePair([usize; 4]),

    #[error("subalgebra is not closed under the bracket")]
    NotClosed,

    #[error("subalgebra is not semisimple")]
    NotSemisimple,

    #[error("subalgebra is reducible with simple factors {0:?}")]
    Reducible(Vec<CartanType>),

    #[error("block operator sum on ({summed}, {acted}) is not a scalar")]
    NonScalar { summed: usize, acted: usize },

    #[error("bracket of blocks {0} and {1} spans more than one block")]
    GradingViolation(usize, usize),

    #[error("normalization mismatch: expected {expected}, got {got}")]
    NormalizationMismatch { expected: String, got: String },

    #[error("invalid metric parameters: {0}")]
    InvalidMetric(String),

    #[error("newton refinement failed: {0}")]
    Newton(String),

    #[error("unknown {kind} {name:?}; known: {known}")]
    UnknownStrategy { kind: &'static str, name: String, known: String },

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
