use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::FockError;
use crate::model::MomentumLattice;

/// Default ceiling on basis dimension.
pub const DEFAULT_BASIS_LIMIT: usize = 2_000_000;

/// Occupation vectors over a subset of lattice modes with
/// `min_total ≤ Σn ≤ max_total` and `n ≤ n_max` per mode.
///
/// States are graded by total occupation, and descending-lexicographic
/// within a grade: `{00, 10, 01, 20, 11, 02}` for two modes up to 2.
/// Ranking uses a completion-count table, so lookups cost `O(modes·n_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationBasis {
    modes: Vec<usize>,
    slot_of: Vec<Option<usize>>,
    min_total: usize,
    max_total: usize,
    n_max: usize,
    states: Vec<u16>,
    // completions[i * (max_total+1) + r]: fillings of slots i.. with total r
    completions: Vec<u128>,
    grade_offsets: Vec<usize>,
}

impl OccupationBasis {
    fn build(
        lattice_len: usize,
        modes: Vec<usize>,
        min_total: usize,
        max_total: usize,
        n_max: usize,
        limit: usize,
    ) -> Result<Self, FockError> {
        let width = modes.len();
        let stride = max_total + 1;
        let mut completions = vec![0u128; (width + 1) * stride];
        completions[width * stride] = 1;
        for i in (0..width).rev() {
            for r in 0..=max_total {
                let mut c = 0u128;
                for v in 0..=r.min(n_max) {
                    c = c.saturating_add(completions[(i + 1) * stride + r - v]);
                }
                completions[i * stride + r] = c;
            }
        }
        let mut total = 0u128;
        let mut grade_offsets = vec![0usize; stride + 1];
        for r in 0..=max_total {
            let count = if r >= min_total { completions[r] } else { 0 };
            total = total.saturating_add(count);
            if total > limit as u128 {
                return Err(FockError::DimensionOverflow { dim: total, limit });
            }
            grade_offsets[r + 1] = total as usize;
        }
        let mut slot_of = vec![None; lattice_len];
        for (s, &m) in modes.iter().enumerate() {
            slot_of[m] = Some(s);
        }
        let mut basis = Self {
            modes,
            slot_of,
            min_total,
            max_total,
            n_max,
            states: Vec::with_capacity(total as usize * width),
            completions,
            grade_offsets,
        };
        let mut cur = vec![0u16; width];
        for r in min_total..=max_total {
            basis.fill(0, r, &mut cur);
        }
        Ok(basis)
    }

    fn fill(&mut self, slot: usize, rem: usize, cur: &mut Vec<u16>) {
        let width = self.modes.len();
        if slot == width {
            if rem == 0 {
                self.states.extend_from_slice(cur);
            }
            return;
        }
        let stride = self.max_total + 1;
        for v in (0..=rem.min(self.n_max)).rev() {
            if self.completions[(slot + 1) * stride + rem - v] == 0 {
                continue;
            }
            cur[slot] = v as u16;
            self.fill(slot + 1, rem - v, cur);
        }
        cur[slot] = 0;
    }

    pub fn dim(&self) -> usize {
        self.grade_offsets[self.max_total + 1]
    }

    /// Number of modes per state.
    pub fn width(&self) -> usize {
        self.modes.len()
    }

    /// Lattice indices of the modes, in slot order.
    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// Slot of a lattice mode, if the basis carries it.
    pub fn slot_of(&self, mode: usize) -> Option<usize> {
        self.slot_of.get(mode).copied().flatten()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn min_total(&self) -> usize {
        self.min_total
    }

    pub fn state(&self, i: usize) -> &[u16] {
        let w = self.modes.len();
        &self.states[i * w..(i + 1) * w]
    }

    pub fn total(&self, i: usize) -> usize {
        self.state(i).iter().map(|&n| n as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> {
        (0..self.dim()).map(move |i| self.state(i))
    }

    /// Row of an occupation vector, `None` if it is not in the basis.
    pub fn index_of<T: Copy + Into<i64>>(&self, occ: &[T]) -> Option<usize> {
        if occ.len() != self.modes.len() {
            return None;
        }
        let mut total = 0usize;
        for &n in occ {
            let n: i64 = n.into();
            if n < 0 || n as usize > self.n_max {
                return None;
            }
            total += n as usize;
        }
        if total < self.min_total || total > self.max_total {
            return None;
        }
        let stride = self.max_total + 1;
        let mut rank = 0u128;
        let mut rem = total;
        for (i, &n) in occ.iter().enumerate() {
            let n: i64 = n.into();
            let n = n as usize;
            // states in this grade that agree so far but put more in slot i
            for v in (n + 1)..=rem.min(self.n_max) {
                rank += self.completions[(i + 1) * stride + rem - v];
            }
            rem -= n;
        }
        Some(self.grade_offsets[total] + rank as usize)
    }
}

/// All occupation vectors over the full lattice with exactly `N` particles.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    inner: OccupationBasis,
    particles: usize,
    zero_slot: usize,
}

impl SectorBasis {
    pub fn new(lattice: &MomentumLattice, particles: usize) -> Result<Self, FockError> {
        Self::with_limit(lattice, particles, DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(lattice: &MomentumLattice, particles: usize, limit: usize) -> Result<Self, FockError> {
        let modes: Vec<usize> = (0..lattice.len()).collect();
        let inner = OccupationBasis::build(lattice.len(), modes, particles, particles, particles, limit)?;
        Ok(Self {
            inner,
            particles,
            zero_slot: lattice.zero_index(),
        })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    /// Slot of the zero mode.
    pub fn zero_slot(&self) -> usize {
        self.zero_slot
    }

    pub fn basis(&self) -> &OccupationBasis {
        &self.inner
    }
}

impl Deref for SectorBasis {
    type Target = OccupationBasis;
    fn deref(&self) -> &OccupationBasis {
        &self.inner
    }
}

/// Occupation vectors over the nonzero modes with at most `K` excitations
/// in total and at most `n_max` per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CappedBasis {
    inner: OccupationBasis,
    cap: usize,
}

impl CappedBasis {
    pub fn new(lattice: &MomentumLattice, cap: usize, n_max: usize) -> Result<Self, FockError> {
        Self::with_limit(lattice, cap, n_max, DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(lattice: &MomentumLattice, cap: usize, n_max: usize, limit: usize) -> Result<Self, FockError> {
        let inner = OccupationBasis::build(lattice.len(), lattice.excitation_modes(), 0, cap, n_max, limit)?;
        Ok(Self { inner, cap })
    }

    /// The space `F^{≤N}` of excitations that is in bijection with the
    /// `N`-particle sector.
    pub fn full(lattice: &MomentumLattice, particles: usize) -> Result<Self, FockError> {
        Self::new(lattice, particles, particles)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn basis(&self) -> &OccupationBasis {
        &self.inner
    }
}

impl Deref for CappedBasis {
    type Target = OccupationBasis;
    fn deref(&self) -> &OccupationBasis {
        &self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(d: usize, p: i32) -> MomentumLattice {
        MomentumLattice::new(d, p).unwrap()
    }

    #[test]
    fn capped_example_order() {
        // d=1, P=1 has two excitation modes
        let b = CappedBasis::new(&lat(1, 1), 2, 2).unwrap();
        let got: Vec<Vec<u16>> = b.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn vacuum_only() {
        let b = CappedBasis::new(&lat(2, 1), 0, 3).unwrap();
        assert_eq!(b.dim(), 1);
        assert!(b.state(0).iter().all(|&n| n == 0));
        let s = SectorBasis::new(&lat(1, 2), 0).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn sector_dimensions() {
        // five modes, N = 3: C(7, 4) = 35
        assert_eq!(SectorBasis::new(&lat(1, 2), 3).unwrap().dim(), 35);
        assert_eq!(SectorBasis::new(&lat(1, 1), 2).unwrap().dim(), 6);
    }

    #[test]
    fn overflow_reported() {
        let err = SectorBasis::with_limit(&lat(3, 1), 6, 1000).unwrap_err();
        assert!(matches!(err, FockError::DimensionOverflow { limit: 1000, .. }));
    }

    #[test]
    fn lookup_inverts_enumeration() {
        let b = CappedBasis::new(&lat(2, 1), 4, 2).unwrap();
        for i in 0..b.dim() {
            assert_eq!(b.index_of(b.state(i)), Some(i));
        }
        assert_eq!(b.index_of(&[3u16, 0, 0, 0, 0, 0, 0, 0]), None);
        assert_eq!(b.index_of(&[1i32, 1, 1, 1, 1, 0, 0, 0]), None);
        assert_eq!(b.index_of(&[-1i32, 0, 0, 0, 0, 0, 0, 0]), None);
    }
}
