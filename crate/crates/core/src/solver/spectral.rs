use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::dense::{eigh_tridiagonal, full_spectrum_dense};
use super::vecops::{dot, norm, orthogonalize, scale};
use crate::error::SolverError;
use crate::fock::SparseOperator;

/// Discrete law `Σ w_i δ_{λ_i}` of `A` in the state `ψ`, points ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    /// Width under which nearby points count as one; also the tie margin
    /// of the tail functions.
    pub resolution: f64,
}

impl SpectralMeasure {
    fn from_pairs(mut pairs: Vec<(f64, f64)>, resolution: f64) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // clusters anchored at their lowest point: (anchor, Σw, Σwx)
        let mut clusters: Vec<(f64, f64, f64)> = Vec::new();
        for (x, w) in pairs {
            match clusters.last_mut() {
                Some(c) if x - c.0 <= resolution => {
                    c.1 += w;
                    c.2 += w * x;
                }
                _ => clusters.push((x, w, w * x)),
            }
        }
        clusters.retain(|c| c.1 > 0.0);
        Self {
            points: clusters.iter().map(|c| c.2 / c.1).collect(),
            weights: clusters.iter().map(|c| c.1).collect(),
            resolution,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `P[X ≤ x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(&p, _)| p <= x + self.resolution)
            .map(|(_, w)| w)
            .sum()
    }

    /// `P[X > x]`; points within `resolution` of `x` count as equal to it.
    pub fn tail_gt(&self, x: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(&p, _)| p > x + self.resolution)
            .map(|(_, w)| w)
            .sum()
    }

    /// `P[X ≥ x]`.
    pub fn tail_ge(&self, x: f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(&p, _)| p >= x - self.resolution)
            .map(|(_, w)| w)
            .sum()
    }

    /// `E[X^k]`.
    pub fn moment(&self, k: i32) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * libm::pow(*p, k as f64)).sum()
    }

    /// `E[e^{λX}]`.
    pub fn mgf(&self, lambda: f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * libm::exp(lambda * p)).sum()
    }

    pub fn max_point(&self) -> Option<f64> {
        self.points.last().copied()
    }
}

/// Exact measure from the dense eigendecomposition. Eigenvalues closer than
/// `resolution` merge into one point.
pub fn spectral_measure_dense(
    op: &SparseOperator,
    psi: &[Complex64],
    limit: usize,
    resolution: f64,
) -> Result<SpectralMeasure, SolverError> {
    check_len(op, psi)?;
    let spec = full_spectrum_dense(op, limit)?;
    let n2 = dot(psi, psi).re;
    let pairs = (0..op.dim())
        .map(|i| {
            let c: Complex64 = spec.vectors.column(i).iter().zip(psi).map(|(v, p)| v.conj() * p).sum();
            (spec.values[i], c.norm_sqr() / n2)
        })
        .collect();
    Ok(SpectralMeasure::from_pairs(pairs, resolution))
}

/// Gauss quadrature from Lanczos on `ψ`. When the Krylov space closes
/// before `max_steps` the result is the exact measure and `exact` is set.
pub fn spectral_measure_lanczos(
    op: &SparseOperator,
    psi: &[Complex64],
    max_steps: usize,
    resolution: f64,
) -> Result<(SpectralMeasure, bool), SolverError> {
    check_len(op, psi)?;
    let b0 = norm(psi);
    if b0 == 0.0 {
        return Err(SolverError::ZeroVector);
    }
    let mut v = psi.to_vec();
    scale(1.0 / b0, &mut v);
    let mut basis = vec![v];
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let (lo, hi) = op.gershgorin_bounds();
    let breakdown = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    let mut exact = false;
    for j in 0..max_steps.min(op.dim()) {
        let mut w = op.apply(&basis[j]);
        alphas.push(dot(&basis[j], &w).re);
        orthogonalize(&mut w, &basis);
        let beta = norm(&w);
        if beta < breakdown || alphas.len() == op.dim() {
            exact = true;
            break;
        }
        if j + 1 == max_steps {
            break;
        }
        betas.push(beta);
        scale(1.0 / beta, &mut w);
        basis.push(w);
    }
    let m = alphas.len();
    let (values, vectors) = eigh_tridiagonal(&alphas, &betas);
    let pairs = (0..m)
        .map(|k| (values[k], vectors[(0, k)] * vectors[(0, k)]))
        .collect();
    Ok((SpectralMeasure::from_pairs(pairs, resolution), exact))
}

/// Chebyshev expansion of the distribution function with the Jackson kernel.
#[derive(Debug, Clone)]
pub struct KpmDistribution {
    center: f64,
    half_width: f64,
    // kernel-damped moments μ_n g_n
    moments: Vec<f64>,
}

impl KpmDistribution {
    /// `num_moments` Chebyshev moments of the law of `A` in `ψ`, with the
    /// spectrum bracketed by Gershgorin bounds.
    pub fn new(op: &SparseOperator, psi: &[Complex64], num_moments: usize) -> Result<Self, SolverError> {
        check_len(op, psi)?;
        let n0 = norm(psi);
        if n0 == 0.0 {
            return Err(SolverError::ZeroVector);
        }
        let (lo, hi) = op.gershgorin_bounds();
        let pad = 1e-2 * (hi - lo).max(1e-8);
        let center = 0.5 * (hi + lo);
        let half_width = 0.5 * (hi - lo) + pad;
        let apply_scaled = |x: &[Complex64]| -> Vec<Complex64> {
            let mut y = op.apply(x);
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi = (*yi - xi * center) / half_width;
            }
            y
        };
        let mut t0 = psi.to_vec();
        scale(1.0 / n0, &mut t0);
        let mut mu = Vec::with_capacity(num_moments);
        let psi0 = t0.clone();
        mu.push(1.0);
        let mut t1 = apply_scaled(&t0);
        if num_moments > 1 {
            mu.push(dot(&psi0, &t1).re);
        }
        for _ in 2..num_moments {
            let mut t2 = apply_scaled(&t1);
            for (a, b) in t2.iter_mut().zip(&t0) {
                *a = *a * 2.0 - b;
            }
            mu.push(dot(&psi0, &t2).re);
            t0 = core::mem::replace(&mut t1, t2);
        }
        let n = num_moments as f64;
        let pi = core::f64::consts::PI;
        let moments = mu
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let k = k as f64;
                let g = ((n - k + 1.0) * libm::cos(pi * k / (n + 1.0))
                    + libm::sin(pi * k / (n + 1.0)) / libm::tan(pi / (n + 1.0)))
                    / (n + 1.0);
                m * g
            })
            .collect();
        Ok(Self {
            center,
            half_width,
            moments,
        })
    }

    /// Smoothed `P[X ≤ x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let y = (x - self.center) / self.half_width;
        if y <= -1.0 {
            return 0.0;
        }
        if y >= 1.0 {
            return 1.0;
        }
        let theta = libm::acos(y);
        let pi = core::f64::consts::PI;
        let mut f = self.moments[0] * (1.0 - theta / pi);
        for (k, m) in self.moments.iter().enumerate().skip(1) {
            let k = k as f64;
            f -= 2.0 / pi * m * libm::sin(k * theta) / k;
        }
        f.clamp(0.0, 1.0)
    }

    pub fn tail_gt(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Spectral resolution `≈ π·half_width/num_moments`.
    pub fn resolution(&self) -> f64 {
        core::f64::consts::PI * self.half_width / self.moments.len() as f64
    }
}

fn check_len(op: &SparseOperator, psi: &[Complex64]) -> Result<(), SolverError> {
    if psi.len() != op.dim() {
        return Err(SolverError::VectorLength {
            expected: op.dim(),
            got: psi.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clustering_merges_close_points() {
        let m = SpectralMeasure::from_pairs(alloc::vec![(1.0, 0.25), (0.0, 0.5), (1.0 + 1e-12, 0.25)], 1e-9);
        assert_eq!(m.points.len(), 2);
        assert_eq!(m.weights, alloc::vec![0.5, 0.5]);
        assert_eq!(m.tail_gt(0.0), 0.5);
        assert_eq!(m.tail_ge(1.0), 0.5);
        assert_eq!(m.tail_gt(1.0), 0.0);
    }

    #[test]
    fn eigenvector_is_point_mass() {
        let d = SparseOperator::diagonal(&[1.0, 2.0, 3.0]);
        let psi = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        let m = spectral_measure_dense(&d, &psi, 10, 1e-9).unwrap();
        assert_eq!(m.points, alloc::vec![2.0]);
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }
}
