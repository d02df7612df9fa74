use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dense::eigh_tridiagonal;
use super::vecops::{axpy, dot, norm, orthogonalize, scale};
use super::SolverOptions;
use crate::error::SolverError;
use crate::fock::SparseOperator;

/// `e^{tA}ψ` for Hermitian `A` and real `t`.
///
/// Lanczos on `ψ` builds `V_m, T_m`; the approximation is
/// `‖ψ‖ V_m e^{τT_m} e₁` with a-posteriori error `‖ψ‖ β_m |(e^{τT_m})_{m,1}|`.
/// When that estimate misses `opts.expm_tol` relative to the result at the
/// largest subspace, the step `τ` is halved and the time is covered in
/// substeps.
pub fn expm_multiply(op: &SparseOperator, psi: &[Complex64], t: f64, opts: &SolverOptions) -> Result<Vec<Complex64>, SolverError> {
    if psi.len() != op.dim() {
        return Err(SolverError::VectorLength {
            expected: op.dim(),
            got: psi.len(),
        });
    }
    if t == 0.0 || norm(psi) == 0.0 {
        return Ok(psi.to_vec());
    }
    let mut current = psi.to_vec();
    let mut remaining = t;
    let mut tau = t;
    let mut halvings = 0;
    while remaining != 0.0 {
        if tau.abs() > remaining.abs() {
            tau = remaining;
        }
        match krylov_step(op, &current, tau, opts) {
            Step::Done(v) => {
                current = v;
                remaining -= tau;
            }
            Step::Retry(estimate) => {
                halvings += 1;
                if halvings > 40 {
                    return Err(SolverError::BreakdownWithoutConvergence { estimate });
                }
                tau *= 0.5;
            }
        }
    }
    Ok(current)
}

enum Step {
    Done(Vec<Complex64>),
    Retry(f64),
}

fn krylov_step(op: &SparseOperator, psi: &[Complex64], tau: f64, opts: &SolverOptions) -> Step {
    let dim = op.dim();
    let m_max = opts.krylov_dim.min(dim).max(1);
    let beta0 = norm(psi);
    let mut v0 = psi.to_vec();
    scale(1.0 / beta0, &mut v0);
    let mut basis = vec![v0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let (lo, hi) = op.gershgorin_bounds();
    let breakdown = 1e-14 * lo.abs().max(hi.abs()).max(1.0);
    let mut estimate = f64::INFINITY;
    for j in 0..m_max {
        let mut w = op.apply(&basis[j]);
        alphas.push(dot(&basis[j], &w).re);
        orthogonalize(&mut w, &basis);
        let beta = norm(&w);
        let steps = alphas.len();
        let happy = beta < breakdown;
        // check every few steps, and always at the end
        if happy || steps == m_max || steps % 4 == 0 {
            let (coeffs, last) = exp_tridiagonal_first_column(&alphas, &betas, tau);
            let result_norm = beta0 * libm::sqrt(coeffs.iter().map(|c| c * c).sum::<f64>());
            estimate = beta0 * beta * last.abs();
            // relative to the result, with a safety factor of 10
            if happy || 10.0 * estimate <= opts.expm_tol * result_norm {
                let mut out = vec![Complex64::new(0.0, 0.0); dim];
                for (c, v) in coeffs.iter().zip(&basis) {
                    axpy(Complex64::new(beta0 * c, 0.0), v, &mut out);
                }
                return Step::Done(out);
            }
            if steps == m_max {
                break;
            }
        }
        if happy {
            break;
        }
        betas.push(beta);
        scale(1.0 / beta, &mut w);
        basis.push(w);
    }
    Step::Retry(estimate)
}

// First column of e^{τT} for the symmetric tridiagonal T, and its last entry.
fn exp_tridiagonal_first_column(alphas: &[f64], betas: &[f64], tau: f64) -> (Vec<f64>, f64) {
    let m = alphas.len();
    let (values, vectors) = eigh_tridiagonal(alphas, betas);
    let col: Vec<f64> = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| vectors[(i, k)] * libm::exp(tau * values[k]) * vectors[(0, k)])
                .sum()
        })
        .collect();
    let last = col[m - 1];
    (col, last)
}

/// `e^{tA}` applied to every basis column, giving the dense matrix.
pub fn expm_dense_columns(op: &SparseOperator, t: f64, opts: &SolverOptions) -> Result<DMatrix<Complex64>, SolverError> {
    let n = op.dim();
    let mut out = DMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let col = expm_multiply(op, &e, t, opts)?;
        for (i, z) in col.into_iter().enumerate() {
            out[(i, j)] = z;
        }
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(out)
}

/// `e^{tA}` from the eigendecomposition of a dense Hermitian `A`.
pub fn expm_hermitian_dense(a: &DMatrix<Complex64>, t: f64) -> DMatrix<Complex64> {
    let spec = super::dense::eigh(a.clone());
    let n = a.nrows();
    let mut scaled = spec.vectors.clone();
    for j in 0..n {
        let f = libm::exp(t * spec.values[j]);
        for i in 0..n {
            scaled[(i, j)] *= f;
        }
    }
    scaled * spec.vectors.adjoint()
}
