use thiserror::Error;

/// Errors produced by validation and construction routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("tuples of length 0 are not ordered")]
    EmptyTuple,

    #[error("input is not non-increasing: {0}")]
    NotSorted(String),

    #[error("not a Newton vector of an isocrystal: {0}")]
    NotNewtonVector(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("not a Kostant representative: {0}")]
    NotKostant(String),

    #[error("stratum does not satisfy the membership conditions")]
    NotInGamma,

    #[error("inconsistent witness: {0}")]
    InvalidWitness(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
