use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::basis::OccupationBasis;
use super::sparse::SparseOperator;
use crate::par;

/// One factor of an operator word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ladder {
    /// `a†` on a lattice mode.
    Create(usize),
    /// `a` on a lattice mode.
    Annihilate(usize),
    /// `√((N − N₊)/N)`, with `N₊` the total occupation of the state it meets.
    Depletion,
    /// `scale·N₊ + shift`.
    NumberAffine { scale: f64, shift: f64 },
}

/// `coeff` times a product of ladder factors, written left to right as in
/// the formula; it acts on a state starting from the rightmost factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub word: Vec<Ladder>,
}

impl Term {
    pub fn new(coeff: impl Into<Complex64>, word: Vec<Ladder>) -> Self {
        Self {
            coeff: coeff.into(),
            word,
        }
    }

    /// The Hermitian conjugate term.
    pub fn adjoint(&self) -> Self {
        let word = self
            .word
            .iter()
            .rev()
            .map(|l| match *l {
                Ladder::Create(m) => Ladder::Annihilate(m),
                Ladder::Annihilate(m) => Ladder::Create(m),
                other => other,
            })
            .collect();
        Self {
            coeff: self.coeff.conj(),
            word,
        }
    }
}

/// `b†_p = a†_p √((N−N₊)/N)`.
pub fn b_dag(p: usize) -> [Ladder; 2] {
    [Ladder::Create(p), Ladder::Depletion]
}

/// `b_p = √((N−N₊)/N) a_p`.
pub fn b(p: usize) -> [Ladder; 2] {
    [Ladder::Depletion, Ladder::Annihilate(p)]
}

#[derive(Clone, Copy)]
enum Slot {
    Create(usize),
    Annihilate(usize),
    Depletion,
    Affine(f64, f64),
}

struct Compiled {
    coeff: Complex64,
    // rightmost factor first
    ops: Vec<Slot>,
}

fn compile(basis: &OccupationBasis, terms: &[Term]) -> Vec<Compiled> {
    terms
        .iter()
        .filter(|t| t.coeff != Complex64::new(0.0, 0.0))
        .map(|t| {
            let ops = t
                .word
                .iter()
                .rev()
                .map(|l| match *l {
                    Ladder::Create(m) => Slot::Create(basis.slot_of(m).expect("mode not carried by the basis")),
                    Ladder::Annihilate(m) => Slot::Annihilate(basis.slot_of(m).expect("mode not carried by the basis")),
                    Ladder::Depletion => Slot::Depletion,
                    Ladder::NumberAffine { scale, shift } => Slot::Affine(scale, shift),
                })
                .collect();
            Compiled { coeff: t.coeff, ops }
        })
        .collect()
}

// Ladder and depletion factors are collected as integer products under a
// single square root, so `a†a` gives exactly `n`.
fn run(ops: &[Slot], occ: &mut [i32], mut total: i64, particles: f64) -> Option<f64> {
    let mut num = 1.0;
    let mut den = 1.0;
    let mut lin = 1.0;
    for op in ops {
        match *op {
            Slot::Annihilate(s) => {
                if occ[s] == 0 {
                    return None;
                }
                num *= occ[s] as f64;
                occ[s] -= 1;
                total -= 1;
            }
            Slot::Create(s) => {
                occ[s] += 1;
                total += 1;
                num *= occ[s] as f64;
            }
            Slot::Depletion => {
                let rem = particles - total as f64;
                if rem <= 0.0 {
                    return None;
                }
                num *= rem;
                den *= particles;
            }
            Slot::Affine(a, c) => {
                let f = a * total as f64 + c;
                if f == 0.0 {
                    return None;
                }
                lin *= f;
            }
        }
    }
    Some(libm::sqrt(num / den) * lin)
}

/// Matrix of `Σ terms` on the basis, projected back onto it: components
/// that leave the basis are dropped. `particles` is the `N` entering
/// depletion factors.
pub fn assemble(basis: &OccupationBasis, particles: usize, terms: &[Term]) -> SparseOperator {
    let compiled = compile(basis, terms);
    let width = basis.width();
    let n = particles as f64;
    let columns = par::map_rows(basis.dim(), |j| {
        let src = basis.state(j);
        let total: i64 = src.iter().map(|&x| x as i64).sum();
        let mut occ = vec![0i32; width];
        let mut col = Vec::new();
        for t in &compiled {
            for (o, &s) in occ.iter_mut().zip(src) {
                *o = s as i32;
            }
            if let Some(amp) = run(&t.ops, &mut occ, total, n) {
                if let Some(i) = basis.index_of(&occ) {
                    col.push((i, t.coeff * amp));
                }
            }
        }
        col
    });
    SparseOperator::from_columns(basis.dim(), columns)
}

/// As [`assemble`], then symmetrized exactly. For term lists that already
/// contain their adjoints this only removes round-off asymmetry.
pub fn assemble_hermitian(basis: &OccupationBasis, particles: usize, terms: &[Term]) -> SparseOperator {
    assemble(basis, particles, terms).hermitized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::CappedBasis;
    use crate::model::MomentumLattice;

    #[test]
    fn adjoint_reverses() {
        let t = Term::new(Complex64::new(1.0, 2.0), vec![Ladder::Create(0), Ladder::Depletion, Ladder::Annihilate(2)]);
        let a = t.adjoint();
        assert_eq!(a.coeff, Complex64::new(1.0, -2.0));
        assert_eq!(a.word, vec![Ladder::Create(2), Ladder::Depletion, Ladder::Annihilate(0)]);
    }

    #[test]
    fn b_dagger_stops_at_n() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let basis = CappedBasis::full(&l, 2).unwrap();
        let op = assemble(&basis, 2, &[Term::new(1.0, b_dag(2).to_vec())]);
        // b†_p on a state with N₊ = N has zero amplitude
        for (i, j, _) in op.triplets() {
            assert!(basis.total(j) < 2);
            assert_eq!(basis.total(i), basis.total(j) + 1);
        }
        // ⟨1_p| b†_p |Ω⟩ = √(N/N) = 1
        let vac = basis.index_of(&[0u16, 0]).unwrap();
        let one = basis.index_of(&[0u16, 1]).unwrap();
        assert!((op.get(one, vac).re - 1.0).abs() < 1e-15);
    }
}
