use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::fock::SparseOperator;
use crate::solver::{expm_multiply, SolverOptions};

/// `Λ_N(λ) = N⁻¹ ln⟨ψ, e^{λS}ψ⟩` on a grid, with shape checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Scgf {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    /// Smallest normalized second difference over consecutive triples;
    /// negative beyond round-off means the grid values are not convex.
    pub min_second_difference: f64,
    pub convex: bool,
}

pub const CONVEXITY_TOL: f64 = 1e-10;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `psi` must be normalized. Grids need not be sorted; convexity is
/// checked along the sorted order.
pub fn scgf(psi: &[Complex64], op: &SparseOperator, lambdas: &[f64], particles: usize, opts: &SolverOptions) -> Result<Scgf, Error> {
    let nf = particles as f64;
    let values = lambdas
        .iter()
        .map(|&l| {
            if l == 0.0 {
                return Ok(0.0);
            }
            let y = expm_multiply(op, psi, l, opts)?;
            Ok(libm::log(dot(psi, &y).re) / nf)
        })
        .collect::<Result<Vec<f64>, Error>>()?;
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| lambdas[a].total_cmp(&lambdas[b]));
    let mut min_second_difference = f64::INFINITY;
    for w in order.windows(3) {
        let (x0, x1, x2) = (lambdas[w[0]], lambdas[w[1]], lambdas[w[2]]);
        let (y0, y1, y2) = (values[w[0]], values[w[1]], values[w[2]]);
        // divided difference, zero for affine data
        let d = (y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0);
        min_second_difference = min_second_difference.min(d);
    }
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok(Scgf {
        lambdas: lambdas.to_vec(),
        values,
        convex: min_second_difference >= -CONVEXITY_TOL * scale,
        min_second_difference,
    })
}

/// `κ_k(S)/N` for `k = 1..=4`, from central moments computed by repeated
/// sparse applications.
pub fn cumulants(psi: &[Complex64], op: &SparseOperator, particles: usize) -> [f64; 4] {
    let nf = particles as f64;
    let a_psi = op.apply(psi);
    let mean = dot(psi, &a_psi).re;
    // (S − mean)ψ and (S − mean)²ψ
    let c1: Vec<Complex64> = a_psi.iter().zip(psi).map(|(a, p)| a - p * mean).collect();
    let a_c1 = op.apply(&c1);
    let c2: Vec<Complex64> = a_c1.iter().zip(&c1).map(|(a, p)| a - p * mean).collect();
    let mu2 = dot(&c1, &c1).re;
    let mu3 = dot(&c1, &c2).re;
    let mu4 = dot(&c2, &c2).re;
    [mean / nf, mu2 / nf, mu3 / nf, (mu4 - 3.0 * mu2 * mu2) / nf]
}
