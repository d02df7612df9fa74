use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::basis::{CappedBasis, SectorBasis};
use super::operators::{hamiltonian, quadratic_q};
use super::sparse::SparseOperator;
use crate::error::FockError;
use crate::model::{MomentumLattice, Potential};

/// The excitation map `U_N` as a relabeling
/// `|n₀, (n_p)_{p≠0}⟩ ↦ |(n_p)_{p≠0}⟩` with `n₀ = N − Σn_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationMap {
    sector_to_capped: Vec<usize>,
    capped_dim: usize,
}

impl ExcitationMap {
    pub fn new(sector: &SectorBasis, capped: &CappedBasis) -> Result<Self, FockError> {
        let n = sector.particles();
        if capped.cap() < n || capped.n_max() < n {
            return Err(FockError::CapBelowN {
                cap: capped.cap().min(capped.n_max()),
                particles: n,
            });
        }
        let z = sector.zero_slot();
        let mut occ = Vec::with_capacity(capped.width());
        let sector_to_capped = (0..sector.dim())
            .map(|i| {
                occ.clear();
                occ.extend(sector.state(i).iter().enumerate().filter(|(s, _)| *s != z).map(|(_, &n)| n));
                capped.index_of(&occ).expect("excitation state inside the capped basis")
            })
            .collect();
        Ok(Self {
            sector_to_capped,
            capped_dim: capped.dim(),
        })
    }

    /// Capped-basis row of sector row `i`.
    pub fn image(&self, i: usize) -> usize {
        self.sector_to_capped[i]
    }

    pub fn sector_dim(&self) -> usize {
        self.sector_to_capped.len()
    }

    /// Bijective when the capped basis is exactly `F^{≤N}`.
    pub fn is_bijective(&self) -> bool {
        self.capped_dim == self.sector_to_capped.len()
    }

    /// `U_N ψ`.
    pub fn forward(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.capped_dim];
        for (i, &c) in psi.iter().enumerate() {
            out[self.sector_to_capped[i]] = c;
        }
        out
    }

    /// `U_N† ξ`, dropping components outside the image.
    pub fn backward(&self, xi: &[Complex64]) -> Vec<Complex64> {
        self.sector_to_capped.iter().map(|&j| xi[j]).collect()
    }

    /// `U_N A U_N†` for a sector operator; requires a bijective map.
    pub fn conjugate(&self, op: &SparseOperator) -> SparseOperator {
        assert!(self.is_bijective(), "conjugation needs the full excitation space");
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.capped_dim];
        for (i, j, a) in op.triplets() {
            rows[self.sector_to_capped[i]].push((self.sector_to_capped[j], a));
        }
        let mut out = SparseOperator::from_rows(self.capped_dim, rows);
        if op.is_hermitian() {
            out = out.hermitized();
        }
        out
    }
}

/// Everything needed to compare the sector and excitation pictures at one `N`.
#[derive(Debug, Clone)]
pub struct ExcitationSetup {
    pub sector: SectorBasis,
    pub capped: CappedBasis,
    pub map: ExcitationMap,
    pub hamiltonian: SparseOperator,
    /// `G_N = U_N H_N U_N† − (N/2)v̂(0)`.
    pub g: SparseOperator,
    pub q: SparseOperator,
    /// `R_N = G_N − Q`.
    pub remainder: SparseOperator,
}

impl ExcitationSetup {
    pub fn new(lattice: &MomentumLattice, potential: &Potential, particles: usize) -> Result<Self, FockError> {
        Self::with_limit(lattice, potential, particles, super::DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(lattice: &MomentumLattice, potential: &Potential, particles: usize, limit: usize) -> Result<Self, FockError> {
        let sector = SectorBasis::with_limit(lattice, particles, limit)?;
        let capped = CappedBasis::with_limit(lattice, particles, particles, limit)?;
        let map = ExcitationMap::new(&sector, &capped)?;
        let hamiltonian = hamiltonian(&sector, lattice, potential)?;
        let shift = -(particles as f64) / 2.0 * potential.value(lattice.zero_index());
        let g = map.conjugate(&hamiltonian).shifted(shift).hermitized();
        let q = quadratic_q(&capped, lattice, potential);
        let remainder = g.sub(&q).hermitized();
        Ok(Self {
            sector,
            capped,
            map,
            hamiltonian,
            g,
            q,
            remainder,
        })
    }

    pub fn particles(&self) -> usize {
        self.sector.particles()
    }

    /// `Q + s R_N`.
    pub fn interpolated(&self, s: f64) -> SparseOperator {
        SparseOperator::linear_combination(&[
            (Complex64::new(1.0, 0.0), &self.q),
            (Complex64::new(s, 0.0), &self.remainder),
        ])
        .hermitized()
    }
}
