// Small complex-vector kernels shared by the Krylov solvers.

use alloc::vec::Vec;

use num_complex::Complex64;

pub(crate) fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm(x: &[Complex64]) -> f64 {
    libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum())
}

pub(crate) fn axpy(a: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub(crate) fn scale(a: f64, x: &mut [Complex64]) {
    for xi in x.iter_mut() {
        *xi *= a;
    }
}

/// Two passes of classical Gram–Schmidt against `basis`.
pub(crate) fn orthogonalize(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for v in basis {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

/// Deterministic start vector with support on every basis state.
pub(crate) fn start_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut state = seed ^ 0x9E37_79B9_7F4A_7C15;
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            Complex64::new(1.0 + u, 0.0)
        })
        .collect();
    let n = norm(&v);
    scale(1.0 / n, &mut v);
    v
}
