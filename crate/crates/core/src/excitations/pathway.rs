use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::fock::{one_body, phi_plus, ExcitationSetup, SparseOperator};
use crate::model::{MomentumLattice, Observable};
use crate::solver::{expm_multiply, ground_state, SolverOptions};
use crate::stats::{power_law_exponent, LinearFit};

/// Both sides of the moment generating function identity at one `λ`, and
/// the sandwich bounds of the `B`-free comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PathwayRow {
    pub lambda: f64,
    /// `⟨ψ_N, e^{λ dΓ(Õ)} ψ_N⟩` on the `N`-particle sector.
    pub sector: f64,
    /// `⟨ψ_G, e^{λ(√N φ₊(g) + B)} ψ_G⟩` on the excitation space.
    pub excitation: f64,
    pub relative_difference: f64,
    /// `ln⟨e^{λ√Nφ₊/2} e^{∓2λ‖O‖N₊} e^{λ√Nφ₊/2}⟩`.
    pub ln_lower: f64,
    pub ln_upper: f64,
    /// How far `ln excitation` leaves `[ln_lower, ln_upper]`; zero inside.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathwayReport {
    pub particles: usize,
    pub rows: Vec<PathwayRow>,
    pub max_relative_difference: f64,
    /// Log-log fit of the violation against `λ` over rows where it is
    /// positive; `None` when fewer than two rows violate.
    pub violation_exponent: Option<LinearFit>,
}

pub const PATHWAY_TOL: f64 = 1e-9;

fn dot_re(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Computes the generating function once through the `N`-particle sector and
/// once through the excitation space, with independently solved ground
/// states.
pub fn mgf_pathway_check(
    setup: &ExcitationSetup,
    lattice: &MomentumLattice,
    observable: &Observable,
    lambdas: &[f64],
    opts: &SolverOptions,
) -> Result<PathwayReport, Error> {
    let n = setup.particles();
    let rn = libm::sqrt(n as f64);
    let psi_n = ground_state(&setup.hamiltonian, opts)?.vector;
    let psi_g = ground_state(&setup.g, opts)?.vector;
    let dgamma = one_body(&setup.sector, lattice, observable.centered())?;
    let field = phi_plus(&setup.capped, lattice, observable.g_hat(), n)?;
    let b = one_body(&setup.capped, lattice, observable.centered())?;
    let exc = SparseOperator::linear_combination(&[(Complex64::new(rn, 0.0), &field), (Complex64::new(1.0, 0.0), &b)]).hermitized();
    let n_plus: Vec<f64> = (0..setup.capped.dim()).map(|i| setup.capped.total(i) as f64).collect();
    let o_norm = observable.op_norm();

    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let sector = dot_re(&psi_n, &expm_multiply(&dgamma, &psi_n, lambda, opts)?);
        let excitation = dot_re(&psi_g, &expm_multiply(&exc, &psi_g, lambda, opts)?);
        let half = expm_multiply(&field, &psi_g, 0.5 * lambda * rn, opts)?;
        let sandwich = |sign: f64| -> f64 {
            half.iter()
                .zip(&n_plus)
                .map(|(z, np)| z.norm_sqr() * libm::exp(sign * 2.0 * lambda * o_norm * np))
                .sum()
        };
        let ln_lower = libm::log(sandwich(-1.0));
        let ln_upper = libm::log(sandwich(1.0));
        let ln_mid = libm::log(excitation);
        rows.push(PathwayRow {
            lambda,
            sector,
            excitation,
            relative_difference: (sector - excitation).abs() / sector.abs().max(f64::MIN_POSITIVE),
            ln_lower,
            ln_upper,
            violation: (ln_lower - ln_mid).max(ln_mid - ln_upper).max(0.0),
        });
    }
    let max_relative_difference = rows.iter().map(|r| r.relative_difference).fold(0.0, f64::max);
    let (x, y): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r.violation > 0.0).map(|r| (r.lambda, r.violation)).unzip();
    Ok(PathwayReport {
        particles: n,
        violation_exponent: if x.len() >= 2 { power_law_exponent(&x, &y) } else { None },
        rows,
        max_relative_difference,
    })
}
