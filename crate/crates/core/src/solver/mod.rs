//! Eigensolvers and matrix-function kernels for Hermitian sparse operators.

mod dense;
mod expm;
mod lanczos;
mod spectral;
mod vecops;

pub use dense::{eigh, eigvalsh, fix_phase, full_spectrum_dense, DenseSpectrum};
pub use expm::{expm_dense_columns, expm_hermitian_dense, expm_multiply};
pub use lanczos::{ground_state, low_spectrum, Eigenpair, GroundStateResult, LowSpectrum};
pub use spectral::{spectral_measure_dense, spectral_measure_lanczos, KpmDistribution, SpectralMeasure};

/// Solver tolerances and size thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Eigenvector residual target.
    pub tol: f64,
    /// Relative error target of `expm_multiply`.
    pub expm_tol: f64,
    /// Largest dimension handled by dense eigendecomposition.
    pub dense_limit: usize,
    /// Dimensions at or below this use dense diagonalization for ground
    /// states instead of Lanczos.
    pub lanczos_threshold: usize,
    /// Krylov subspace size per Lanczos pass.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Relative eigenvalue spacing under which levels count as degenerate.
    pub degeneracy_tol: f64,
    /// Chebyshev moments of the kernel-polynomial path.
    pub kpm_moments: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            expm_tol: 1e-10,
            dense_limit: 4000,
            lanczos_threshold: 200,
            krylov_dim: 120,
            max_restarts: 500,
            degeneracy_tol: 1e-9,
            kpm_moments: 2048,
        }
    }
}
