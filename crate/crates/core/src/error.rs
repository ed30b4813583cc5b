//! Error type shared by all modules.

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation column {column} does not lie in the numerator lattice")]
    NotASubgroup { column: usize },
    #[error("vector does not lie in the numerator lattice")]
    NotInSubgroup,
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("graph has no vertices")]
    EmptyVertexSet,
    #[error("modulus is empty")]
    EmptyModulus,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("id `{0}` is reserved for the extended graph")]
    ReservedId(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("divisor has degree {0}, expected 0")]
    NonZeroDegree(BigInt),
    #[error("{check} failed: {witness}")]
    TheoremViolation { check: String, witness: String },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("map is not harmonic at vertex `{0}`")]
    NotHarmonic(String),
    #[error("adjointness fails: {0}")]
    AdjointnessViolated(String),
    #[error("vertex `{0}` is isolated")]
    IsolatedVertex(String),
    #[error("morphism is not harmonic at `{vertex}`: fibre sizes {sizes:?}")]
    NotHarmonicAt { vertex: String, sizes: Vec<usize> },
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("sheaf map does not commute with restrictions at edge `{0}`")]
    NonCommutingSheafMap(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn violation(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::TheoremViolation {
            check: check.into(),
            witness: witness.into(),
        }
    }
}
