use alloc::vec::Vec;

use super::MomentumLattice;
use crate::error::ModelError;

/// Fourier coefficients `v̂(p) ≥ 0`, even in `p`, one per lattice mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    coeffs: Vec<f64>,
    l1_norm: f64,
}

impl Potential {
    /// Checks positivity and evenness. Evenness is exact equality: presets
    /// and config files produce the two values from the same literal.
    pub fn validate(coeffs: Vec<f64>, lattice: &MomentumLattice) -> Result<Self, ModelError> {
        if coeffs.len() != lattice.len() {
            return Err(ModelError::LengthMismatch {
                expected: lattice.len(),
                got: coeffs.len(),
            });
        }
        for (i, &v) in coeffs.iter().enumerate() {
            if !v.is_finite() {
                return Err(ModelError::NonFinite { index: i });
            }
            if v < 0.0 {
                return Err(ModelError::NegativeCoefficient { index: i, value: v });
            }
        }
        for (i, &v) in coeffs.iter().enumerate() {
            let j = lattice.partner(i);
            if v != coeffs[j] {
                return Err(ModelError::AsymmetricCoefficient {
                    index: i.min(j),
                    partner: i.max(j),
                });
            }
        }
        let l1_norm = coeffs.iter().map(|v| v.abs()).sum();
        Ok(Self { coeffs, l1_norm })
    }

    pub fn zero(lattice: &MomentumLattice) -> Self {
        Self {
            coeffs: alloc::vec![0.0; lattice.len()],
            l1_norm: 0.0,
        }
    }

    /// `v̂ ≡ scale` on every mode.
    pub fn constant(lattice: &MomentumLattice, scale: f64) -> Result<Self, ModelError> {
        Self::validate(alloc::vec![scale; lattice.len()], lattice)
    }

    /// One value per shell of equal `|n|`, shells counted from the origin
    /// outward. Modes past the last listed shell get 0.
    pub fn shells(lattice: &MomentumLattice, values: &[f64]) -> Result<Self, ModelError> {
        let radii = shell_radii(lattice);
        let coeffs = (0..lattice.len())
            .map(|i| {
                let r = lattice.norm_sq_int(i);
                let k = radii.binary_search(&r).unwrap_or(usize::MAX);
                values.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Self::validate(coeffs, lattice)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self, i: usize) -> f64 {
        self.coeffs[i]
    }

    pub fn l1_norm(&self) -> f64 {
        self.l1_norm
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&v| v == 0.0)
    }
}

/// Distinct values of `|n|²` on the lattice, ascending.
pub fn shell_radii(lattice: &MomentumLattice) -> Vec<i64> {
    let mut radii: Vec<i64> = (0..lattice.len()).map(|i| lattice.norm_sq_int(i)).collect();
    radii.sort_unstable();
    radii.dedup();
    radii
}
