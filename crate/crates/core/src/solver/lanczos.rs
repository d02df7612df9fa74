use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::dense::{eigh, eigh_tridiagonal, fix_phase};
use super::vecops::{axpy, dot, norm, orthogonalize, scale, start_vector};
use super::SolverOptions;
use crate::error::SolverError;
use crate::fock::SparseOperator;

/// Lowest eigenpair plus the gap to the next eigenvalue.
#[derive(Debug, Clone)]
pub struct GroundStateResult {
    /// Rayleigh quotient of `vector`.
    pub energy: f64,
    pub vector: Vec<Complex64>,
    /// `E₁ − E₀`; infinite on a one-dimensional space.
    pub gap: f64,
    /// `‖A v − E₀ v‖`.
    pub residual: f64,
    /// Set when `E₁ − E₀` is below the degeneracy threshold.
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

/// `k` lowest eigenpairs, ascending, orthonormal.
#[derive(Debug, Clone)]
pub struct LowSpectrum {
    pub pairs: Vec<Eigenpair>,
    /// Indices `i` where `pairs[i+1].value − pairs[i].value` is below the
    /// degeneracy threshold.
    pub degenerate_with_next: Vec<usize>,
}

fn residual(op: &SparseOperator, v: &[Complex64], theta: f64) -> f64 {
    let mut w = op.apply(v);
    axpy(Complex64::new(-theta, 0.0), v, &mut w);
    norm(&w)
}

fn rayleigh(op: &SparseOperator, v: &[Complex64]) -> f64 {
    dot(v, &op.apply(v)).re / dot(v, v).re
}

fn degeneracy_threshold(opts: &SolverOptions, scale_hint: f64) -> f64 {
    opts.degeneracy_tol * scale_hint.max(1.0)
}

/// Ground state with gap; dense below `opts.lanczos_threshold`, Lanczos
/// with full reorthogonalization above.
pub fn ground_state(op: &SparseOperator, opts: &SolverOptions) -> Result<GroundStateResult, SolverError> {
    let dim = op.dim();
    if dim == 0 {
        return Err(SolverError::TooManyEigenpairs { requested: 1, dim });
    }
    let k = dim.min(2);
    let low = low_spectrum(op, k, opts)?;
    let e0 = &low.pairs[0];
    let gap = if k == 2 { low.pairs[1].value - e0.value } else { f64::INFINITY };
    let energy = rayleigh(op, &e0.vector);
    Ok(GroundStateResult {
        energy,
        vector: e0.vector.clone(),
        gap: gap.max(0.0),
        residual: residual(op, &e0.vector, energy),
        degenerate: !low.degenerate_with_next.is_empty() && low.degenerate_with_next[0] == 0,
    })
}

pub fn low_spectrum(op: &SparseOperator, k: usize, opts: &SolverOptions) -> Result<LowSpectrum, SolverError> {
    let dim = op.dim();
    if k > dim || k == 0 {
        return Err(SolverError::TooManyEigenpairs { requested: k, dim });
    }
    let pairs = if dim <= opts.lanczos_threshold {
        let spec = eigh(op.to_dense());
        (0..k)
            .map(|i| {
                let v = spec.vector(i);
                Eigenpair {
                    value: spec.values[i],
                    residual: residual(op, &v, spec.values[i]),
                    vector: v,
                }
            })
            .collect()
    } else {
        lanczos_locked(op, k, opts)?
    };
    let (lo, hi) = op.gershgorin_bounds();
    let thr = degeneracy_threshold(opts, lo.abs().max(hi.abs()));
    let degenerate_with_next = (0..pairs.len().saturating_sub(1))
        .filter(|&i| pairs[i + 1].value - pairs[i].value < thr)
        .collect();
    Ok(LowSpectrum {
        pairs,
        degenerate_with_next,
    })
}

struct Run {
    ritz: Vec<(f64, Vec<Complex64>)>,
}

// One Lanczos pass of at most `m` steps from `start`, kept orthogonal to
// `locked`. Returns Ritz pairs ascending.
fn lanczos_pass(op: &SparseOperator, start: &[Complex64], locked: &[Vec<Complex64>], m: usize, tol: f64) -> Option<Run> {
    let mut v0 = start.to_vec();
    orthogonalize(&mut v0, locked);
    let n0 = norm(&v0);
    if n0 < 1e-12 {
        return None;
    }
    scale(1.0 / n0, &mut v0);
    let mut basis: Vec<Vec<Complex64>> = vec![v0];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    // a coupling this small leaves Ritz residuals well under `tol`
    let breakdown = 1e-2 * tol;
    for j in 0..m {
        let mut w = op.apply(&basis[j]);
        let alpha = dot(&basis[j], &w).re;
        alphas.push(alpha);
        let before = norm(&w);
        orthogonalize_both(&mut w, locked, &basis);
        let mut beta = norm(&w);
        if beta < 1e-8 * before {
            // heavy cancellation leaves round-off that leaks back into the
            // projected directions; one more pass removes it
            orthogonalize_both(&mut w, locked, &basis);
            beta = norm(&w);
        }
        if j + 1 == m {
            break;
        }
        if beta < breakdown {
            // invariant subspace reached; continue in a fresh direction so
            // that a restart does not rebuild the same space
            let mut fresh = start_vector(op.dim(), 7919 + j as u64);
            for (i, z) in fresh.iter_mut().enumerate() {
                if (i * 2654435761) % 3 == 0 {
                    *z = -*z;
                }
            }
            orthogonalize_both(&mut fresh, locked, &basis);
            let n = norm(&fresh);
            if n < 1e-8 {
                break;
            }
            scale(1.0 / n, &mut fresh);
            betas.push(0.0);
            basis.push(fresh);
            continue;
        }
        betas.push(beta);
        scale(1.0 / beta, &mut w);
        basis.push(w);
    }
    let steps = alphas.len();
    let (values, vectors) = eigh_tridiagonal(&alphas, &betas);
    let dim = op.dim();
    let ritz = (0..steps)
        .map(|c| {
            let mut y = vec![Complex64::new(0.0, 0.0); dim];
            for (i, v) in basis.iter().enumerate() {
                axpy(Complex64::new(vectors[(i, c)], 0.0), v, &mut y);
            }
            orthogonalize(&mut y, locked);
            let n = norm(&y);
            scale(1.0 / n, &mut y);
            (values[c], y)
        })
        .collect();
    Some(Run { ritz })
}

fn orthogonalize_both(w: &mut [Complex64], locked: &[Vec<Complex64>], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for v in locked.iter().chain(basis) {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

fn lanczos_locked(op: &SparseOperator, k: usize, opts: &SolverOptions) -> Result<Vec<Eigenpair>, SolverError> {
    let dim = op.dim();
    let (lo, hi) = op.gershgorin_bounds();
    let anorm = lo.abs().max(hi.abs()).max(1.0);
    // residuals below ~ε‖A‖ are not reachable in floating point
    let tol = opts.tol.max(1e3 * f64::EPSILON * anorm);
    let mut locked: Vec<Vec<Complex64>> = Vec::new();
    let mut pairs: Vec<Eigenpair> = Vec::new();
    let mut start = start_vector(dim, 1);
    let mut best = f64::INFINITY;
    let mut iterations = 0;
    while pairs.len() < k {
        if iterations >= opts.max_restarts {
            return Err(SolverError::NoConvergence {
                iterations,
                best_residual: best,
            });
        }
        iterations += 1;
        let m = opts.krylov_dim.min(dim - locked.len());
        let Some(run) = lanczos_pass(op, &start, &locked, m, tol) else {
            // start vector lies in the locked space; reseed
            start = start_vector(dim, 17 + iterations as u64);
            continue;
        };
        let (_, y) = &run.ritz[0];
        let theta = rayleigh(op, y);
        let r = residual(op, y, theta);
        best = best.min(r);
        if r <= tol {
            let mut v = y.clone();
            fix_phase(&mut v);
            locked.push(v.clone());
            pairs.push(Eigenpair {
                value: theta,
                vector: v,
                residual: r,
            });
            best = f64::INFINITY;
            // seed the next target from the next Ritz vector, perturbed so
            // that degenerate partners are reachable
            let mut next = start_vector(dim, 101 + pairs.len() as u64);
            scale(1e-2, &mut next);
            if let Some((_, y1)) = run.ritz.get(1) {
                axpy(Complex64::new(1.0, 0.0), y1, &mut next);
            }
            start = next;
        } else {
            start = y.clone();
        }
    }
    // locking order is ascending up to round-off; sort to be safe
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    Ok(pairs)
}
