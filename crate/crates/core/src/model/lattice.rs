use alloc::vec::Vec;

use crate::error::ModelError;
use crate::TWO_PI_SQ;

/// Integer mode vector `n` with `p = 2πn`; unused trailing components are 0.
pub type ModeVec = [i32; 3];

/// The cube `[-P, P]^d` of torus momenta in units of `2π`.
///
/// Modes are ordered lexicographically with the first component most
/// significant, each component running upward from `-P`. The zero mode sits
/// at the center.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumLattice {
    dim: usize,
    cutoff: i32,
    modes: Vec<ModeVec>,
    zero_index: usize,
    pair_map: Vec<usize>,
}

impl MomentumLattice {
    pub fn new(dim: usize, cutoff: i32) -> Result<Self, ModelError> {
        if !(1..=3).contains(&dim) {
            return Err(ModelError::BadDimension(dim));
        }
        if cutoff < 1 {
            return Err(ModelError::BadCutoff(cutoff));
        }
        let side = (2 * cutoff + 1) as usize;
        let len = side.pow(dim as u32);
        let mut modes = Vec::with_capacity(len);
        for flat in 0..len {
            let mut n = [0i32; 3];
            let mut rest = flat;
            for c in (0..dim).rev() {
                n[c] = (rest % side) as i32 - cutoff;
                rest /= side;
            }
            modes.push(n);
        }
        let mut lattice = Self {
            dim,
            cutoff,
            modes,
            zero_index: (len - 1) / 2,
            pair_map: Vec::new(),
        };
        // the cube is symmetric, so negation reverses the flat order
        lattice.pair_map = (0..len).map(|i| len - 1 - i).collect();
        Ok(lattice)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[ModeVec] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> ModeVec {
        self.modes[i]
    }

    pub fn zero_index(&self) -> usize {
        self.zero_index
    }

    /// Index of `-p` for the mode at index `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.pair_map[i]
    }

    pub fn pair_map(&self) -> &[usize] {
        &self.pair_map
    }

    pub fn index_of(&self, n: ModeVec) -> Option<usize> {
        let side = 2 * self.cutoff + 1;
        let mut idx = 0usize;
        for (c, &nc) in n.iter().enumerate() {
            if c >= self.dim {
                if nc != 0 {
                    return None;
                }
                continue;
            }
            if nc.abs() > self.cutoff {
                return None;
            }
            idx = idx * side as usize + (nc + self.cutoff) as usize;
        }
        Some(idx)
    }

    /// `|n|²` in integer units.
    pub fn norm_sq_int(&self, i: usize) -> i64 {
        self.modes[i].iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    /// `|p|² = 4π²|n|²`.
    pub fn momentum_sq(&self, i: usize) -> f64 {
        TWO_PI_SQ * self.norm_sq_int(i) as f64
    }

    pub fn add(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.modes[i], self.modes[j]);
        self.index_of([a[0] + b[0], a[1] + b[1], a[2] + b[2]])
    }

    pub fn sub(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.modes[i], self.modes[j]);
        self.index_of([a[0] - b[0], a[1] - b[1], a[2] - b[2]])
    }

    /// Nonzero modes in lattice order.
    pub fn excitation_modes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| i != self.zero_index).collect()
    }

    /// Representatives of the unordered pairs `{p, -p}`, `p ≠ 0`.
    pub fn pair_representatives(&self) -> Vec<usize> {
        (0..self.zero_index).collect()
    }
}
