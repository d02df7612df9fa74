//! Error types, one enum per layer plus a wrapper.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("dimension must be 1, 2 or 3 (got {0})")]
    BadDimension(usize),
    #[error("cutoff must be at least 1 (got {0})")]
    BadCutoff(i32),
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient at mode {index} is negative ({value})")]
    NegativeCoefficient { index: usize, value: f64 },
    #[error("coefficient at mode {index} differs from its partner {partner}")]
    AsymmetricCoefficient { index: usize, partner: usize },
    #[error("coefficient at mode {index} is not finite")]
    NonFinite { index: usize },
    #[error("observable matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },
    #[error("mode vector {0:?} is outside the lattice")]
    ModeOutOfRange([i32; 3]),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("basis dimension {dim} exceeds the limit {limit}")]
    DimensionOverflow { dim: u128, limit: usize },
    #[error("operator needs N >= 2 (got {0})")]
    TooFewParticles(usize),
    #[error("mode set mismatch: operator has {operator} modes, basis has {basis}")]
    ModeMismatch { operator: usize, basis: usize },
    #[error("vector length {got} does not match basis dimension {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("remainder needs the full excitation space (cap {cap} < N = {particles})")]
    CapBelowN { cap: usize, particles: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence { iterations: usize, best_residual: f64 },
    #[error("Krylov breakdown before reaching tolerance (error estimate {estimate:e})")]
    BreakdownWithoutConvergence { estimate: f64 },
    #[error("dimension {dim} exceeds the dense limit {limit}")]
    DimensionOverflow { dim: usize, limit: usize },
    #[error("requested {requested} eigenpairs from a {dim}-dimensional operator")]
    TooManyEigenpairs { requested: usize, dim: usize },
    #[error("input vector has zero norm")]
    ZeroVector,
    #[error("vector length {got} does not match operator dimension {expected}")]
    VectorLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}
