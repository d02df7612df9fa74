use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{MomentumLattice, ModeVec};
use crate::error::ModelError;
use crate::solver::eigvalsh;

/// How a one-body observable is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableSpec {
    /// Row-major `M×M` matrix in the plane-wave basis.
    Matrix(Vec<Complex64>),
    /// Multiplication by `cos(2π k·x)`.
    CosMode(ModeVec),
    /// Multiplication by `sin(2π k·x)`.
    SinMode(ModeVec),
}

/// A Hermitian one-body operator `Ô_{p,q} = ⟨φ_p, O φ_q⟩` and the derived
/// quantities used downstream.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<Complex64>,
    centered: DMatrix<Complex64>,
    g_hat: Vec<Complex64>,
    mean_zero: f64,
    op_norm: f64,
    triple_norm: f64,
}

/// Relative tolerance for accepting a matrix as Hermitian before it is
/// symmetrized exactly.
pub const HERMITIAN_TOL: f64 = 1e-12;

impl Observable {
    pub fn build(spec: &ObservableSpec, lattice: &MomentumLattice) -> Result<Self, ModelError> {
        let m = lattice.len();
        let raw = match spec {
            ObservableSpec::Matrix(entries) => {
                if entries.len() != m * m {
                    return Err(ModelError::LengthMismatch {
                        expected: m * m,
                        got: entries.len(),
                    });
                }
                if let Some(i) = entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(ModelError::NonFinite { index: i });
                }
                DMatrix::from_row_slice(m, m, entries)
            }
            ObservableSpec::CosMode(k) => shift_matrix(lattice, *k, Complex64::new(0.5, 0.0))?,
            ObservableSpec::SinMode(k) => shift_matrix(lattice, *k, Complex64::new(0.0, -0.5))?,
        };
        let deviation = max_hermitian_deviation(&raw);
        let scale = raw.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if deviation > HERMITIAN_TOL * scale {
            return Err(ModelError::NonHermitian { deviation });
        }
        Ok(Self::from_hermitian(hermitize(&raw), lattice))
    }

    fn from_hermitian(matrix: DMatrix<Complex64>, lattice: &MomentumLattice) -> Self {
        let m = lattice.len();
        let z = lattice.zero_index();
        let mean_zero = matrix[(z, z)].re;
        let mut centered = matrix.clone();
        for i in 0..m {
            centered[(i, i)] -= Complex64::new(mean_zero, 0.0);
        }
        let g_hat = (0..m)
            .map(|p| if p == z { Complex64::new(0.0, 0.0) } else { matrix[(p, z)] })
            .collect();
        let op_norm = hermitian_spectral_radius(&matrix);
        let weights: Vec<f64> = (0..m).map(|i| 1.0 + lattice.momentum_sq(i)).collect();
        let weighted = DMatrix::from_fn(m, m, |p, q| matrix[(p, q)] * (weights[p] / weights[q]));
        let triple_norm = largest_singular_value(&weighted);
        Self {
            matrix,
            centered,
            g_hat,
            mean_zero,
            op_norm,
            triple_norm,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `Õ = Ô − Ô_{0,0}·Id`.
    pub fn centered(&self) -> &DMatrix<Complex64> {
        &self.centered
    }

    /// `ĝ(p) = Ô_{p,0}` on the full lattice, zero at the zero mode.
    pub fn g_hat(&self) -> &[Complex64] {
        &self.g_hat
    }

    pub fn g_norm_sq(&self) -> f64 {
        self.g_hat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨φ₀, O φ₀⟩`.
    pub fn mean_zero(&self) -> f64 {
        self.mean_zero
    }

    pub fn op_norm(&self) -> f64 {
        self.op_norm
    }

    /// Largest singular value of `(1+|p|²) Ô_{p,q} (1+|q|²)⁻¹`.
    pub fn triple_norm(&self) -> f64 {
        self.triple_norm
    }
}

fn shift_matrix(lattice: &MomentumLattice, k: ModeVec, forward: Complex64) -> Result<DMatrix<Complex64>, ModelError> {
    let kidx = lattice.index_of(k).ok_or(ModelError::ModeOutOfRange(k))?;
    let m = lattice.len();
    let mut mat = DMatrix::zeros(m, m);
    for q in 0..m {
        // p − q = k carries `forward`, p − q = −k its conjugate
        if let Some(p) = lattice.add(q, kidx) {
            mat[(p, q)] += forward;
        }
        if let Some(p) = lattice.sub(q, kidx) {
            mat[(p, q)] += forward.conj();
        }
    }
    Ok(mat)
}

pub(crate) fn max_hermitian_deviation(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `½(A + A†)`.
pub fn hermitize(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

fn hermitian_spectral_radius(a: &DMatrix<Complex64>) -> f64 {
    eigvalsh(a).iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Square root of the top eigenvalue of `A†A`.
pub fn largest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    let gram = a.adjoint() * a;
    let top = eigvalsh(&gram).iter().fold(0.0f64, |m, v| m.max(*v));
    libm::sqrt(top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_centers_to_zero() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let id: Vec<Complex64> = (0..9).map(|k| if k % 4 == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect();
        let o = Observable::build(&ObservableSpec::Matrix(id), &l).unwrap();
        assert!(o.centered().iter().all(|z| z.norm() == 0.0));
        assert!(o.g_hat().iter().all(|z| z.norm() == 0.0));
        assert_eq!(o.triple_norm(), 1.0);
        assert!((o.op_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cos_mode_fourier_coefficients() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
        assert_eq!(o.g_hat(), &[c(0.5, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert_eq!(o.mean_zero(), 0.0);
        assert_eq!(o.g_norm_sq(), 0.5);
    }

    #[test]
    fn sin_mode_is_odd_and_imaginary() {
        let l = MomentumLattice::new(1, 2).unwrap();
        let o = Observable::build(&ObservableSpec::SinMode([1, 0, 0]), &l).unwrap();
        let g = o.g_hat();
        assert_eq!(g[3], c(0.0, -0.5));
        assert_eq!(g[1], c(0.0, 0.5));
        assert_eq!(g[0], c(0.0, 0.0));
    }

    #[test]
    fn diagonal_triple_norm() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let mut m = vec![c(0.0, 0.0); 9];
        m[0] = c(-3.0, 0.0);
        m[4] = c(2.0, 0.0);
        m[8] = c(1.0, 0.0);
        let o = Observable::build(&ObservableSpec::Matrix(m), &l).unwrap();
        assert!((o.triple_norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let mut m = vec![c(0.0, 0.0); 9];
        m[1] = c(1.0, 0.0);
        assert!(matches!(
            Observable::build(&ObservableSpec::Matrix(m), &l),
            Err(ModelError::NonHermitian { .. })
        ));
    }

    #[test]
    fn mode_outside_lattice() {
        let l = MomentumLattice::new(1, 1).unwrap();
        assert_eq!(
            Observable::build(&ObservableSpec::CosMode([2, 0, 0]), &l),
            Err(ModelError::ModeOutOfRange([2, 0, 0]))
        );
    }
}
