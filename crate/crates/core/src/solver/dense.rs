use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::SolverError;
use crate::fock::SparseOperator;

/// All eigenpairs of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`, phase-fixed so its
    /// first non-negligible entry is real and positive.
    pub vectors: DMatrix<Complex64>,
}

impl DenseSpectrum {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i).iter().copied().collect()
    }

    /// `max |A − V Λ V†|`.
    pub fn reconstruction_error(&self, a: &DMatrix<Complex64>) -> f64 {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        let rec = scaled * self.vectors.adjoint();
        (a - rec).iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

pub fn full_spectrum_dense(op: &SparseOperator, limit: usize) -> Result<DenseSpectrum, SolverError> {
    if op.dim() > limit {
        return Err(SolverError::DimensionOverflow { dim: op.dim(), limit });
    }
    Ok(eigh(op.to_dense()))
}

/// Eigendecomposition of a dense Hermitian matrix.
///
/// Panics if `a` has non-finite entries.
pub fn eigh(a: DMatrix<Complex64>) -> DenseSpectrum {
    let n = a.nrows();
    if n == 0 {
        return DenseSpectrum {
            values: Vec::new(),
            vectors: a,
        };
    }
    let m = faer::Mat::<Complex64>::from_fn(n, n, |i, j| a[(i, j)]);
    let eig = m.self_adjoint_eigen(faer::Side::Lower).expect("Hermitian eigensolver converges on finite input");
    let s = eig.S().column_vector();
    let u = eig.U();
    // faer returns ascending eigenvalues
    let values = (0..n).map(|k| s[k].re).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut col: Vec<Complex64> = (0..n).map(|i| u[(i, k)]).collect();
        fix_phase(&mut col);
        for (i, z) in col.into_iter().enumerate() {
            vectors[(i, k)] = z;
        }
    }
    DenseSpectrum { values, vectors }
}

/// Eigenvalues (ascending) and eigenvectors of the symmetric tridiagonal
/// matrix with diagonal `alphas` and off-diagonal `betas`.
pub(crate) fn eigh_tridiagonal(alphas: &[f64], betas: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alphas.len();
    let t = faer::Mat::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j {
            betas[i]
        } else if j + 1 == i {
            betas[j]
        } else {
            0.0
        }
    });
    let eig = t.self_adjoint_eigen(faer::Side::Lower).expect("tridiagonal eigensolver converges on finite input");
    let s = eig.S().column_vector();
    let u = eig.U();
    ((0..m).map(|k| s[k]).collect(), DMatrix::from_fn(m, m, |i, k| u[(i, k)]))
}

/// Eigenvalues of a dense Hermitian matrix, ascending.
pub fn eigvalsh(a: &DMatrix<Complex64>) -> Vec<f64> {
    let n = a.nrows();
    if n == 0 {
        return Vec::new();
    }
    let m = faer::Mat::<Complex64>::from_fn(n, n, |i, j| a[(i, j)]);
    m.self_adjoint_eigenvalues(faer::Side::Lower).expect("Hermitian eigensolver converges on finite input")
}

/// Rotates `v` so its first entry above `1e-10·max|v_i|` is real positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let big = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if big == 0.0 {
        return;
    }
    if let Some(z) = v.iter().find(|z| z.norm() > 1e-10 * big).copied() {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}
