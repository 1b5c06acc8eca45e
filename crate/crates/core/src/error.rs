use thiserror::Error;

/// Errors produced by the chain solvers and sweep machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain parameters: {0}")]
    InvalidSpec(String),

    #[error("site pair ({i}, {j}) out of range for a chain of {n} spins")]
    SiteOutOfRange { i: usize, j: usize, n: usize },

    #[error("pair ({i}, {j}) is not a nearest-neighbour bond; the free-fermion path cannot evaluate it")]
    NonAdjacentPair { i: usize, j: usize },

    #[error("closed-form alternating expressions require an odd number of spins, got {0}")]
    EvenChainLength(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver failed to converge: {0}")]
    NonConvergence(String),

    #[error("exact diagonalization limited to {cap} spins, got {n}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
