//! Closed-form Bogoliubov theory of the quadratic Hamiltonian `Q`.
//!
//! All per-mode vectors are indexed by lattice position, with the zero mode
//! carrying `0` so that they line up with [`Observable::g_hat`].

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::fock::CappedBasis;
use crate::model::{MomentumLattice, Observable, Potential};

/// `μ_p = ½ atanh(−v̂(p)/(p² + v̂(p)))`, the solution of
/// `coth(2μ_p) = −(p² + v̂(p))/v̂(p)`; zero where `v̂(p) = 0`.
pub fn solve_mu(lattice: &MomentumLattice, potential: &Potential) -> Vec<f64> {
    let z = lattice.zero_index();
    (0..lattice.len())
        .map(|i| {
            let v = potential.value(i);
            if i == z || v == 0.0 {
                0.0
            } else {
                0.5 * libm::atanh(-v / (lattice.momentum_sq(i) + v))
            }
        })
        .collect()
}

/// `E(p) = √(p⁴ + 2p²v̂(p))`.
pub fn dispersion(lattice: &MomentumLattice, potential: &Potential) -> Vec<f64> {
    (0..lattice.len())
        .map(|i| {
            let p2 = lattice.momentum_sq(i);
            libm::sqrt(p2 * p2 + 2.0 * p2 * potential.value(i))
        })
        .collect()
}

/// Which reflection the antilinear part of `f` uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FConvention {
    /// `f(p) = cosh μ_p ĝ(p) + sinh μ_{−p} conj(ĝ(p))`.
    Direct,
    /// `f(p) = cosh μ_p ĝ(p) + sinh μ_{−p} conj(ĝ(−p))`.
    Reflected,
}

impl FConvention {
    pub const ALL: [FConvention; 2] = [FConvention::Direct, FConvention::Reflected];

    pub fn label(self) -> &'static str {
        match self {
            FConvention::Direct => "direct",
            FConvention::Reflected => "reflected",
        }
    }
}

pub fn transformed_f(lattice: &MomentumLattice, g_hat: &[Complex64], mu: &[f64], convention: FConvention) -> Vec<Complex64> {
    (0..lattice.len())
        .map(|i| {
            let j = lattice.partner(i);
            let conj = match convention {
                FConvention::Direct => g_hat[i].conj(),
                FConvention::Reflected => g_hat[j].conj(),
            };
            g_hat[i] * libm::cosh(mu[i]) + conj * libm::sinh(mu[j])
        })
        .collect()
}

pub fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `Σ_p sinh² μ_p`, the excitation number of the quasi-free state.
pub fn depletion(mu: &[f64]) -> f64 {
    mu.iter().map(|m| libm::sinh(*m) * libm::sinh(*m)).sum()
}

/// A closed-form ground-energy candidate for `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyCandidate {
    pub label: &'static str,
    pub value: f64,
}

pub const CANDIDATE_SQUEEZE: &str = "-sum E cosh(mu) sinh(mu)";
pub const CANDIDATE_HALF_GAP: &str = "half sum (E - p^2 - v)";

/// `−Σ E(p) cosh μ_p sinh μ_{−p}` and `½ Σ [E(p) − p² − v̂(p)]`.
pub fn energy_candidates(lattice: &MomentumLattice, potential: &Potential, mu: &[f64], e: &[f64]) -> Vec<EnergyCandidate> {
    let mut squeeze = 0.0;
    let mut half = 0.0;
    for i in lattice.excitation_modes() {
        let j = lattice.partner(i);
        squeeze -= e[i] * libm::cosh(mu[i]) * libm::sinh(mu[j]);
        half += 0.5 * (e[i] - lattice.momentum_sq(i) - potential.value(i));
    }
    vec![
        EnergyCandidate {
            label: CANDIDATE_SQUEEZE,
            value: squeeze,
        },
        EnergyCandidate {
            label: CANDIDATE_HALF_GAP,
            value: half,
        },
    ]
}

/// Everything the closed-form theory predicts for one lattice, potential
/// and observable.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovData {
    pub modes: Vec<usize>,
    pub mu: Vec<f64>,
    pub dispersion: Vec<f64>,
    pub f_direct: Vec<Complex64>,
    pub f_reflected: Vec<Complex64>,
    pub depletion: f64,
    pub energy_candidates: Vec<EnergyCandidate>,
}

impl BogoliubovData {
    pub fn new(lattice: &MomentumLattice, potential: &Potential, observable: &Observable) -> Self {
        let mu = solve_mu(lattice, potential);
        let e = dispersion(lattice, potential);
        let g = observable.g_hat();
        Self {
            modes: lattice.excitation_modes(),
            f_direct: transformed_f(lattice, g, &mu, FConvention::Direct),
            f_reflected: transformed_f(lattice, g, &mu, FConvention::Reflected),
            depletion: depletion(&mu),
            energy_candidates: energy_candidates(lattice, potential, &mu, &e),
            dispersion: e,
            mu,
        }
    }

    pub fn f(&self, convention: FConvention) -> &[Complex64] {
        match convention {
            FConvention::Direct => &self.f_direct,
            FConvention::Reflected => &self.f_reflected,
        }
    }

    pub fn f_norm_sq(&self, convention: FConvention) -> f64 {
        norm_sq(self.f(convention))
    }
}

/// Residuals of the relations tying `μ_p` to `v̂` and `E(p)`, maximized
/// over excitation modes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsistencyResiduals {
    /// `|coth(2μ)·v̂ + p² + v̂|` over modes with `v̂ > 0`.
    pub coth: f64,
    /// `|cosh(2μ) − (p² + v̂)/E|`.
    pub cosh: f64,
    /// `|sinh(2μ) + v̂/E|`.
    pub sinh: f64,
    /// Distance of the eigenvalues of `[[p²+v̂, v̂], [−v̂, −(p²+v̂)]]` from
    /// `±E(p)`, relative to `E(p)`.
    pub symplectic: f64,
}

pub fn consistency_residuals(lattice: &MomentumLattice, potential: &Potential, mu: &[f64], e: &[f64]) -> ConsistencyResiduals {
    let mut r = ConsistencyResiduals::default();
    for i in lattice.excitation_modes() {
        let p2 = lattice.momentum_sq(i);
        let v = potential.value(i);
        let m2 = 2.0 * mu[i];
        if v > 0.0 {
            // relative to the size of the two cancelling terms
            r.coth = r.coth.max((libm::cosh(m2) / libm::sinh(m2) * v + p2 + v).abs() / (p2 + v));
        }
        r.cosh = r.cosh.max((libm::cosh(m2) - (p2 + v) / e[i]).abs());
        r.sinh = r.sinh.max((libm::sinh(m2) + v / e[i]).abs());
        let block = Matrix2::new(p2 + v, v, -v, -(p2 + v));
        let mut ev: Vec<f64> = block.complex_eigenvalues().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        let dev = (ev[0] + e[i]).abs().max((ev[1] - e[i]).abs());
        r.symplectic = r.symplectic.max(dev / e[i]);
    }
    r
}

/// Ground state of `Q` built from two-mode squeezed vacua, projected on a
/// capped basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiFreeState {
    pub vector: Vec<Complex64>,
    /// Probability mass of the untruncated state outside the basis.
    pub tail_mass: f64,
    /// Set when `tail_mass` exceeds [`QUASIFREE_TAIL_LIMIT`].
    pub cap_too_small: bool,
}

pub const QUASIFREE_TAIL_LIMIT: f64 = 1e-8;

/// The pair `{p, −p}` carries amplitude `tanh(μ_p)ⁿ / cosh μ_p` on
/// `n_p = n_{−p} = n`; other occupations vanish. The truncated vector is
/// renormalized.
pub fn quasifree_ground_state(lattice: &MomentumLattice, mu: &[f64], basis: &CappedBasis) -> QuasiFreeState {
    let reps = lattice.pair_representatives();
    let slots: Vec<(usize, usize)> = reps
        .iter()
        .filter_map(|&p| Some((basis.slot_of(p)?, basis.slot_of(lattice.partner(p))?)))
        .collect();
    let mut vector = vec![Complex64::new(0.0, 0.0); basis.dim()];
    let mut kept = 0.0;
    for (i, slot) in vector.iter_mut().enumerate() {
        let occ = basis.state(i);
        if slots.iter().any(|&(a, b)| occ[a] != occ[b]) {
            continue;
        }
        let amp: f64 = reps
            .iter()
            .zip(&slots)
            .map(|(&p, &(a, _))| libm::pow(libm::tanh(mu[p]), occ[a] as f64) / libm::cosh(mu[p]))
            .product();
        kept += amp * amp;
        *slot = Complex64::new(amp, 0.0);
    }
    let tail_mass = (1.0 - kept).max(0.0);
    let s = 1.0 / libm::sqrt(kept);
    for z in vector.iter_mut() {
        *z *= s;
    }
    QuasiFreeState {
        vector,
        tail_mass,
        cap_too_small: tail_mass > QUASIFREE_TAIL_LIMIT,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ObservableSpec;
    use crate::TWO_PI_SQ;

    fn one_pair(v: f64) -> (MomentumLattice, Potential) {
        let l = MomentumLattice::new(1, 1).unwrap();
        let p = Potential::constant(&l, v).unwrap();
        (l, p)
    }

    #[test]
    fn free_gas() {
        let (l, p) = one_pair(0.0);
        let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
        let d = BogoliubovData::new(&l, &p, &o);
        assert!(d.mu.iter().all(|m| *m == 0.0));
        assert_eq!(d.f_direct, o.g_hat());
        assert_eq!(d.depletion, 0.0);
        assert!(d.energy_candidates.iter().all(|c| c.value == 0.0));
        assert_eq!(d.dispersion[0], TWO_PI_SQ);
    }

    #[test]
    fn unit_coupling_values() {
        let (l, p) = one_pair(1.0);
        let mu = solve_mu(&l, &p);
        assert!((mu[0] + 0.012355).abs() < 1e-6);
        let e = dispersion(&l, &p);
        let want = 2.0 * core::f64::consts::PI * libm::sqrt(TWO_PI_SQ + 2.0);
        assert!((e[2] - want).abs() < 1e-12 && (e[2] - 40.46606).abs() < 1e-4);
    }

    #[test]
    fn mu_shrinks_with_momentum() {
        let l = MomentumLattice::new(1, 3).unwrap();
        let p = Potential::constant(&l, 1.0).unwrap();
        let mu = solve_mu(&l, &p);
        let z = l.zero_index();
        for k in 1..3 {
            assert!(mu[z + k].abs() > mu[z + k + 1].abs());
            assert_eq!(mu[z + k], mu[z - k]);
        }
    }

    #[test]
    fn vacuum_when_uncoupled() {
        let (l, p) = one_pair(0.0);
        let b = CappedBasis::new(&l, 4, 2).unwrap();
        let s = quasifree_ground_state(&l, &solve_mu(&l, &p), &b);
        assert_eq!(s.vector[0], Complex64::new(1.0, 0.0));
        assert_eq!(s.tail_mass, 0.0);
    }

    #[test]
    fn tiny_cap_flagged() {
        let (l, p) = one_pair(5.0);
        let b = CappedBasis::new(&l, 2, 1).unwrap();
        let s = quasifree_ground_state(&l, &solve_mu(&l, &p), &b);
        assert!(s.cap_too_small);
        let n: f64 = s.vector.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }
}
