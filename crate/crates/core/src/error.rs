use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Lie type: {0}")]
    InvalidLieType(String),

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight {0} is not dominant integral")]
    NotDominantIntegral(String),

    #[error("weight {0} is not dominant for the subalgebra")]
    NotHDominant(String),

    #[error("invalid subalgebra spec: {0}")]
    InvalidHSpec(String),

    #[error("root set is not closed under the root-system operations: {0}")]
    NotClosed(String),

    #[error("dimension cap exceeded: {needed} > {cap}")]
    DimensionCap { needed: usize, cap: usize },

    #[error("character is not invariant under the subalgebra Weyl group")]
    NotWhInvariant,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
