//! Assemblers for the second-quantized operators of the model.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{CappedBasis, OccupationBasis, SectorBasis};
use super::ladder::{assemble, assemble_hermitian, b, b_dag, Ladder, Term};
use super::sparse::SparseOperator;
use crate::error::FockError;
use crate::model::{MomentumLattice, Potential};

use Ladder::{Annihilate as A, Create as C};

fn check_modes(m: &DMatrix<Complex64>, lattice: &MomentumLattice) -> Result<(), FockError> {
    if m.nrows() != lattice.len() || m.ncols() != lattice.len() {
        return Err(FockError::ModeMismatch {
            operator: m.nrows(),
            basis: lattice.len(),
        });
    }
    Ok(())
}

fn check_vec(h: &[Complex64], lattice: &MomentumLattice) -> Result<(), FockError> {
    if h.len() != lattice.len() {
        return Err(FockError::ModeMismatch {
            operator: h.len(),
            basis: lattice.len(),
        });
    }
    Ok(())
}

/// `dΓ(M) = Σ M_{p,q} a†_p a_q` over the modes the basis carries. `M` is
/// indexed by lattice modes and taken to be Hermitian.
pub fn one_body(basis: &OccupationBasis, lattice: &MomentumLattice, m: &DMatrix<Complex64>) -> Result<SparseOperator, FockError> {
    check_modes(m, lattice)?;
    let mut terms = Vec::new();
    for &p in basis.modes() {
        for &q in basis.modes() {
            if m[(p, q)] != Complex64::new(0.0, 0.0) {
                terms.push(Term::new(m[(p, q)], vec![C(p), A(q)]));
            }
        }
    }
    Ok(assemble_hermitian(basis, 0, &terms))
}

/// Total occupation of each basis state as a diagonal operator. On a capped
/// basis this is `N₊`.
pub fn number_operator(basis: &OccupationBasis) -> SparseOperator {
    let diag: Vec<f64> = (0..basis.dim()).map(|i| basis.total(i) as f64).collect();
    SparseOperator::diagonal(&diag)
}

/// `f(N₊)` as a diagonal operator on a capped basis.
pub fn number_function(basis: &OccupationBasis, f: impl Fn(f64) -> f64) -> SparseOperator {
    let diag: Vec<f64> = (0..basis.dim()).map(|i| f(basis.total(i) as f64)).collect();
    SparseOperator::diagonal(&diag)
}

/// `Σ p² a†_p a_p` over the modes the basis carries.
pub fn kinetic(basis: &OccupationBasis, lattice: &MomentumLattice) -> SparseOperator {
    let diag: Vec<f64> = (0..basis.dim())
        .map(|i| {
            basis
                .state(i)
                .iter()
                .zip(basis.modes())
                .map(|(&n, &m)| n as f64 * lattice.momentum_sq(m))
                .sum()
        })
        .collect();
    SparseOperator::diagonal(&diag)
}

/// `H_N = Σ p² a†_p a_p + (2(N−1))⁻¹ Σ_{p,q,k} v̂(k) a†_{p−k} a†_{q+k} a_q a_p`,
/// keeping only terms whose modes all lie on the lattice.
pub fn hamiltonian(basis: &SectorBasis, lattice: &MomentumLattice, potential: &Potential) -> Result<SparseOperator, FockError> {
    let n = basis.particles();
    if n < 2 {
        return Err(FockError::TooFewParticles(n));
    }
    let pref = 1.0 / (2.0 * (n as f64 - 1.0));
    let mut terms = Vec::new();
    for p in 0..lattice.len() {
        terms.push(Term::new(lattice.momentum_sq(p), vec![C(p), A(p)]));
    }
    for k in 0..lattice.len() {
        let vk = potential.value(k);
        if vk == 0.0 {
            continue;
        }
        for p in 0..lattice.len() {
            let Some(pk) = lattice.sub(p, k) else { continue };
            for q in 0..lattice.len() {
                let Some(qk) = lattice.add(q, k) else { continue };
                terms.push(Term::new(pref * vk, vec![C(pk), C(qk), A(q), A(p)]));
            }
        }
    }
    Ok(assemble_hermitian(basis, n, &terms))
}

/// Bogoliubov quadratic form
/// `Q = Σ_{p≠0} [(p² + v̂(p)) a†_p a_p + ½v̂(p)(a†_p a†_{−p} + a_p a_{−p})]`,
/// projected onto the capped basis.
pub fn quadratic_q(basis: &CappedBasis, lattice: &MomentumLattice, potential: &Potential) -> SparseOperator {
    assemble_hermitian(basis, basis.cap(), &quadratic_terms(lattice, potential))
}

pub(crate) fn quadratic_terms(lattice: &MomentumLattice, potential: &Potential) -> Vec<Term> {
    let mut terms = Vec::new();
    for p in lattice.excitation_modes() {
        let v = potential.value(p);
        let mp = lattice.partner(p);
        terms.push(Term::new(lattice.momentum_sq(p) + v, vec![C(p), A(p)]));
        if v != 0.0 {
            terms.push(Term::new(0.5 * v, vec![C(p), C(mp)]));
            terms.push(Term::new(0.5 * v, vec![A(p), A(mp)]));
        }
    }
    terms
}

/// Which coefficients to use when transcribing the remainder term by term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemainderForm {
    /// The finite-N identity `G_N − Q` expanded in `a` and `b` operators.
    Exact,
    /// The published signs and prefactors of the pair, diagonal and cubic
    /// groups, with the adjoint pairing `b_p b_{−p}` in the second bracket.
    AsPrinted,
}

/// Remainder `R_N` assembled group by group on `F^{≤N}`.
pub fn remainder_transcribed(
    basis: &CappedBasis,
    lattice: &MomentumLattice,
    potential: &Potential,
    particles: usize,
    form: RemainderForm,
) -> Result<SparseOperator, FockError> {
    if particles < 2 {
        return Err(FockError::TooFewParticles(particles));
    }
    if basis.cap() < particles {
        return Err(FockError::CapBelowN {
            cap: basis.cap(),
            particles,
        });
    }
    let terms = remainder_terms(lattice, potential, particles, form);
    Ok(assemble_hermitian(basis, particles, &terms))
}

fn cat<const A: usize, const B: usize>(x: [Ladder; A], y: [Ladder; B]) -> Vec<Ladder> {
    x.into_iter().chain(y).collect()
}

fn remainder_terms(lattice: &MomentumLattice, potential: &Potential, particles: usize, form: RemainderForm) -> Vec<Term> {
    let nf = particles as f64;
    let exc = lattice.excitation_modes();
    let mut terms = Vec::new();

    // pair group
    for &p in &exc {
        let v = potential.value(p);
        if v == 0.0 {
            continue;
        }
        let mp = lattice.partner(p);
        let (bb, aa) = match form {
            RemainderForm::Exact => (0.5 * v * nf / (nf - 1.0), -0.5 * v),
            RemainderForm::AsPrinted => (-0.5 * v, 0.5 * v),
        };
        terms.push(Term::new(bb, cat(b_dag(p), b_dag(mp))));
        terms.push(Term::new(bb, cat(b(mp), b(p))));
        terms.push(Term::new(aa, vec![C(p), C(mp)]));
        terms.push(Term::new(aa, vec![A(p), A(mp)]));
    }

    // diagonal group: ±(N₊ − 1)/(N − 1) Σ v̂(p) a†_p a_p
    let sign = match form {
        RemainderForm::Exact => -1.0,
        RemainderForm::AsPrinted => 1.0,
    };
    let scale = sign / (nf - 1.0);
    for &p in &exc {
        let v = potential.value(p);
        if v != 0.0 {
            terms.push(Term::new(
                v,
                vec![Ladder::NumberAffine { scale, shift: -scale }, C(p), A(p)],
            ));
        }
    }

    // cubic group
    let cubic = match form {
        RemainderForm::Exact => libm::sqrt(nf) / (nf - 1.0),
        RemainderForm::AsPrinted => 1.0 / libm::sqrt(nf - 1.0),
    };
    for &p in &exc {
        for &q in &exc {
            let v = potential.value(q);
            if v == 0.0 {
                continue;
            }
            let Some(pq) = lattice.add(p, q) else { continue };
            if pq == lattice.zero_index() {
                continue;
            }
            let t = Term::new(cubic * v, cat(b_dag(pq), [C(lattice.partner(q)), A(p)]));
            terms.push(t.adjoint());
            terms.push(t);
        }
    }

    // quartic group, all four momenta nonzero
    let quartic = 1.0 / (2.0 * (nf - 1.0));
    for &k in &exc {
        let v = potential.value(k);
        if v == 0.0 {
            continue;
        }
        for &p in &exc {
            let Some(pk) = lattice.sub(p, k) else { continue };
            if pk == lattice.zero_index() {
                continue;
            }
            for &q in &exc {
                let Some(qk) = lattice.add(q, k) else { continue };
                if qk == lattice.zero_index() {
                    continue;
                }
                terms.push(Term::new(quartic * v, vec![C(pk), C(qk), A(q), A(p)]));
            }
        }
    }
    terms
}

/// `b(h) = Σ_p conj(h_p) b_p`; `h` is indexed by lattice modes and its
/// zero-mode entry is ignored.
pub fn b_field(basis: &CappedBasis, lattice: &MomentumLattice, h: &[Complex64], particles: usize) -> Result<SparseOperator, FockError> {
    check_vec(h, lattice)?;
    let terms: Vec<Term> = lattice
        .excitation_modes()
        .into_iter()
        .map(|p| Term::new(h[p].conj(), b(p).to_vec()))
        .collect();
    Ok(assemble(basis, particles, &terms))
}

/// `b†(h) = Σ_p h_p b†_p`.
pub fn b_dag_field(basis: &CappedBasis, lattice: &MomentumLattice, h: &[Complex64], particles: usize) -> Result<SparseOperator, FockError> {
    check_vec(h, lattice)?;
    let terms: Vec<Term> = lattice
        .excitation_modes()
        .into_iter()
        .map(|p| Term::new(h[p], b_dag(p).to_vec()))
        .collect();
    Ok(assemble(basis, particles, &terms))
}

/// `φ₊(h) = b†(h) + b(h)`.
pub fn phi_plus(basis: &CappedBasis, lattice: &MomentumLattice, h: &[Complex64], particles: usize) -> Result<SparseOperator, FockError> {
    let bd = b_dag_field(basis, lattice, h, particles)?;
    let bh = b_field(basis, lattice, h, particles)?;
    Ok(bd.add(&bh).hermitized())
}

/// `iφ₋(h) = b(h) − b†(h)`, anti-Hermitian.
pub fn i_phi_minus(basis: &CappedBasis, lattice: &MomentumLattice, h: &[Complex64], particles: usize) -> Result<SparseOperator, FockError> {
    let bd = b_dag_field(basis, lattice, h, particles)?;
    let bh = b_field(basis, lattice, h, particles)?;
    Ok(bh.sub(&bd))
}

/// `φ₋(h) = −i(b(h) − b†(h))`, Hermitian.
pub fn phi_minus(basis: &CappedBasis, lattice: &MomentumLattice, h: &[Complex64], particles: usize) -> Result<SparseOperator, FockError> {
    let ipm = i_phi_minus(basis, lattice, h, particles)?;
    Ok(SparseOperator::linear_combination(&[(Complex64::new(0.0, -1.0), &ipm)]).hermitized())
}

/// Single-mode `b_p`.
pub fn b_mode(basis: &CappedBasis, p: usize, particles: usize) -> SparseOperator {
    assemble(basis, particles, &[Term::new(1.0, b(p).to_vec())])
}

/// Single-mode `a_p` (or `a†_p` with `create`).
pub fn a_mode(basis: &OccupationBasis, p: usize, create: bool) -> SparseOperator {
    let l = if create { C(p) } else { A(p) };
    assemble(basis, 0, &[Term::new(1.0, vec![l])])
}

/// `a†(h₁) a(h₂) = Σ_{p,q} h₁(p) conj(h₂(q)) a†_p a_q` over the basis modes.
pub fn a_dag_a(basis: &OccupationBasis, lattice: &MomentumLattice, h1: &[Complex64], h2: &[Complex64]) -> Result<SparseOperator, FockError> {
    check_vec(h1, lattice)?;
    check_vec(h2, lattice)?;
    let mut terms = Vec::new();
    for &p in basis.modes() {
        for &q in basis.modes() {
            let c = h1[p] * h2[q].conj();
            if c != Complex64::new(0.0, 0.0) {
                terms.push(Term::new(c, vec![C(p), A(q)]));
            }
        }
    }
    Ok(assemble(basis, 0, &terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TWO_PI_SQ;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_is_number() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let s = SectorBasis::new(&l, 3).unwrap();
        let id = DMatrix::identity(3, 3);
        let op = one_body(&s, &l, &id).unwrap();
        assert_eq!(op.to_dense(), DMatrix::identity(s.dim(), s.dim()) * c(3.0));
    }

    #[test]
    fn one_particle_hopping() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let s = SectorBasis::new(&l, 1).unwrap();
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = c(1.0);
        m[(1, 0)] = c(1.0);
        let op = one_body(&s, &l, &m).unwrap();
        // one-particle states: e₀, e₁, e₂ in that order
        let d = op.to_dense();
        assert_eq!(d[(0, 1)], c(1.0));
        assert_eq!(d[(1, 0)], c(1.0));
        assert_eq!(op.nnz(), 2);
    }

    #[test]
    fn condensate_energy() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let s = SectorBasis::new(&l, 2).unwrap();
        let v = Potential::constant(&l, 1.0).unwrap();
        let h = hamiltonian(&s, &l, &v).unwrap();
        let i = s.index_of(&[0u16, 2, 0]).unwrap();
        assert!((h.get(i, i).re - 1.0).abs() < 1e-14);
        assert_eq!(h.max_hermitian_deviation(), 0.0);
    }

    #[test]
    fn single_pair_q_block() {
        let l = MomentumLattice::new(1, 1).unwrap();
        let basis = CappedBasis::new(&l, 2, 2).unwrap();
        let v = Potential::constant(&l, 1.0).unwrap();
        let q = quadratic_q(&basis, &l, &v);
        let vac = basis.index_of(&[0u16, 0]).unwrap();
        let pair = basis.index_of(&[1u16, 1]).unwrap();
        assert_eq!(q.get(vac, vac), c(0.0));
        assert!((q.get(vac, pair).re - 1.0).abs() < 1e-15);
        assert!((q.get(pair, pair).re - 2.0 * (TWO_PI_SQ + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn free_remainder_vanishes() {
        let l = MomentumLattice::new(1, 2).unwrap();
        let basis = CappedBasis::full(&l, 3).unwrap();
        let v = Potential::zero(&l);
        for form in [RemainderForm::Exact, RemainderForm::AsPrinted] {
            assert_eq!(remainder_transcribed(&basis, &l, &v, 3, form).unwrap().nnz(), 0);
        }
    }

    #[test]
    fn phi_plus_vacuum_second_moment() {
        let l = MomentumLattice::new(1, 2).unwrap();
        let n = 4;
        let basis = CappedBasis::full(&l, n).unwrap();
        let h = [c(0.1), Complex64::new(0.0, 0.2), c(0.0), c(-0.3), Complex64::new(0.05, 0.05)];
        let phi = phi_plus(&basis, &l, &h, n).unwrap();
        let mut vac = vec![Complex64::new(0.0, 0.0); basis.dim()];
        vac[0] = c(1.0);
        let y = phi.apply(&vac);
        let norm_sq: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        let h_sq: f64 = h.iter().enumerate().filter(|(i, _)| *i != 2).map(|(_, z)| z.norm_sqr()).sum();
        assert!((norm_sq - h_sq).abs() < 1e-15);
    }
}
