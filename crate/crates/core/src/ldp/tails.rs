use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::fock::SparseOperator;
use crate::solver::{spectral_measure_dense, spectral_measure_lanczos, KpmDistribution, SolverOptions, SpectralMeasure};

/// Law of `S` in `ψ`: exact point measure when it can be computed,
/// otherwise a kernel-polynomial approximation of its distribution
/// function.
#[derive(Debug, Clone)]
pub enum ObservableLaw {
    Exact(SpectralMeasure),
    Smoothed(KpmDistribution),
}

impl ObservableLaw {
    /// Dense below `opts.dense_limit`, then Lanczos quadrature if the Krylov
    /// space closes, then the kernel-polynomial path.
    pub fn new(op: &SparseOperator, psi: &[Complex64], opts: &SolverOptions, resolution: f64) -> Result<Self, Error> {
        if op.dim() <= opts.dense_limit {
            return Ok(Self::Exact(spectral_measure_dense(op, psi, opts.dense_limit, resolution)?));
        }
        let (m, exact) = spectral_measure_lanczos(op, psi, opts.dense_limit, resolution)?;
        if exact {
            return Ok(Self::Exact(m));
        }
        Ok(Self::Smoothed(KpmDistribution::new(op, psi, opts.kpm_moments)?))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    /// Width below which the law cannot resolve features.
    pub fn resolution(&self) -> f64 {
        match self {
            Self::Exact(m) => m.resolution,
            Self::Smoothed(k) => k.resolution(),
        }
    }

    pub fn cdf(&self, s: f64) -> f64 {
        match self {
            Self::Exact(m) => m.cdf(s),
            Self::Smoothed(k) => k.cdf(s),
        }
    }

    pub fn tail_gt(&self, s: f64) -> f64 {
        match self {
            Self::Exact(m) => m.tail_gt(s),
            Self::Smoothed(k) => k.tail_gt(s),
        }
    }

    /// `P[S ≥ s]`; on the smoothed path this equals `tail_gt`.
    pub fn tail_ge(&self, s: f64) -> f64 {
        match self {
            Self::Exact(m) => m.tail_ge(s),
            Self::Smoothed(k) => k.tail_gt(s),
        }
    }

    pub fn measure(&self) -> Option<&SpectralMeasure> {
        match self {
            Self::Exact(m) => Some(m),
            Self::Smoothed(_) => None,
        }
    }
}

/// `P[O_N > x]` and `P[O_N ≥ x]` with `O_N = S/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRow {
    pub x: f64,
    pub gt: f64,
    pub ge: f64,
    /// `−N⁻¹ ln P[O_N ≥ x]`, infinite when the tail is empty.
    pub rate: f64,
}

pub fn tail_probabilities(law: &ObservableLaw, particles: usize, xs: &[f64]) -> Vec<TailRow> {
    let nf = particles as f64;
    xs.iter()
        .map(|&x| {
            let ge = law.tail_ge(nf * x);
            TailRow {
                x,
                gt: law.tail_gt(nf * x),
                ge,
                rate: if ge > 0.0 { -libm::log(ge) / nf } else { f64::INFINITY },
            }
        })
        .collect()
}

/// `sup_λ (λx − Λ(λ))` over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendrePoint {
    pub x: f64,
    pub value: f64,
    pub argmax: f64,
    /// The maximizer is the largest grid `λ`, so the true supremum may be
    /// larger.
    pub at_boundary: bool,
}

pub fn legendre(lambdas: &[f64], values: &[f64], xs: &[f64]) -> Vec<LegendrePoint> {
    let lmax = lambdas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    xs.iter()
        .map(|&x| {
            let (argmax, value) = lambdas
                .iter()
                .zip(values)
                .map(|(&l, &v)| (l, l * x - v))
                .fold((f64::NAN, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
            LegendrePoint {
                x,
                value,
                argmax,
                at_boundary: argmax == lmax && lambdas.len() > 1,
            }
        })
        .collect()
}

/// `rate − sup_λ(λx − Λ_N(λ))` for `λ ≥ 0` on the grid; the Chernoff
/// bound makes it non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffCell {
    pub x: f64,
    pub rate: f64,
    pub bound: f64,
    pub margin: f64,
    /// Empty tail: the inequality holds trivially.
    pub vacuous: bool,
}

pub const CHERNOFF_TOL: f64 = 1e-10;

pub fn chernoff_check(lambdas: &[f64], values: &[f64], tails: &[TailRow]) -> Vec<ChernoffCell> {
    tails
        .iter()
        .map(|t| {
            let bound = lambdas
                .iter()
                .zip(values)
                .filter(|(l, _)| **l >= 0.0)
                .map(|(l, v)| l * t.x - v)
                .fold(f64::NEG_INFINITY, f64::max);
            let vacuous = t.ge == 0.0;
            ChernoffCell {
                x: t.x,
                rate: t.rate,
                bound,
                margin: if vacuous { f64::INFINITY } else { t.rate - bound },
                vacuous,
            }
        })
        .collect()
}

pub fn chernoff_holds(cells: &[ChernoffCell]) -> bool {
    cells.iter().all(|c| c.margin >= -CHERNOFF_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn quadratic_legendre() {
        let lambdas: Vec<f64> = (0..=4000).map(|i| i as f64 * 1e-3).collect();
        let sigma2 = 0.7;
        let values: Vec<f64> = lambdas.iter().map(|l| l * l * sigma2 / 2.0).collect();
        for p in legendre(&lambdas, &values, &[0.0, 0.3, 1.0]) {
            assert!((p.value - p.x * p.x / (2.0 * sigma2)).abs() < 1e-6);
            assert!(!p.at_boundary);
        }
        assert!(legendre(&lambdas, &values, &[10.0])[0].at_boundary);
    }

    #[test]
    fn empty_tail_is_vacuous() {
        let tails = vec![TailRow {
            x: 1.0,
            gt: 0.0,
            ge: 0.0,
            rate: f64::INFINITY,
        }];
        let c = chernoff_check(&[0.0, 1.0], &[0.0, 0.1], &tails);
        assert!(c[0].vacuous && chernoff_holds(&c));
    }
}
