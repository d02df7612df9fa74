use mfbose_core::fock::{
    b_dag_field, b_field, b_mode, number_operator, one_body, phi_plus, remainder_transcribed, a_dag_a, CappedBasis,
    ExcitationMap, ExcitationSetup, RemainderForm, SectorBasis, SparseOperator,
};
use mfbose_core::model::{MomentumLattice, Observable, ObservableSpec, Potential};
use mfbose_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shells(l: &MomentumLattice) -> Potential {
    Potential::shells(l, &[1.0, 0.5, 0.25]).unwrap()
}

fn rel_frob(a: &SparseOperator, b: &SparseOperator, scale: &SparseOperator) -> f64 {
    a.sub(b).frobenius_norm() / scale.frobenius_norm()
}

#[test]
fn excitation_identity_exact_remainder() {
    for p in [1, 2] {
        let l = MomentumLattice::new(1, p).unwrap();
        let v = shells(&l);
        for n in 2..=6 {
            let e = ExcitationSetup::new(&l, &v, n).unwrap();
            let r = remainder_transcribed(&e.capped, &l, &v, n, RemainderForm::Exact).unwrap();
            let res = rel_frob(&e.g, &e.q.add(&r), &e.q);
            assert!(res < 1e-12, "P={p} N={n}: {res:e}");
        }
    }
}

#[test]
fn excitation_identity_two_dimensions() {
    let l = MomentumLattice::new(2, 1).unwrap();
    let v = shells(&l);
    let e = ExcitationSetup::new(&l, &v, 3).unwrap();
    let r = remainder_transcribed(&e.capped, &l, &v, 3, RemainderForm::Exact).unwrap();
    assert!(rel_frob(&e.g, &e.q.add(&r), &e.q) < 1e-12);
}

#[test]
fn printed_remainder_is_not_exact() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 1.0).unwrap();
    let e = ExcitationSetup::new(&l, &v, 4).unwrap();
    let r = remainder_transcribed(&e.capped, &l, &v, 4, RemainderForm::AsPrinted).unwrap();
    assert!(rel_frob(&e.g, &e.q.add(&r), &e.q) > 1e-3);
}

#[test]
fn tiny_remainder_matches_operational() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 1.0).unwrap();
    let e = ExcitationSetup::new(&l, &v, 2).unwrap();
    let r = remainder_transcribed(&e.capped, &l, &v, 2, RemainderForm::Exact).unwrap();
    assert!(r.sub(&e.remainder).max_abs() < 1e-10);
}

#[test]
fn condensate_expectation_of_h() {
    let l = MomentumLattice::new(1, 2).unwrap();
    let v = shells(&l);
    for n in 2..=5 {
        let s = SectorBasis::new(&l, n).unwrap();
        let h = mfbose_core::fock::hamiltonian(&s, &l, &v).unwrap();
        let mut psi = vec![Complex64::new(0.0, 0.0); s.dim()];
        let mut cond = vec![0u16; 5];
        cond[2] = n as u16;
        psi[s.index_of(&cond).unwrap()] = Complex64::new(1.0, 0.0);
        let e = h.expectation(&psi).re;
        assert!((e - n as f64 / 2.0).abs() < 1e-12);
    }
}

#[test]
fn hamiltonian_conserves_momentum() {
    let l = MomentumLattice::new(1, 2).unwrap();
    let s = SectorBasis::new(&l, 4).unwrap();
    let h = mfbose_core::fock::hamiltonian(&s, &l, &shells(&l)).unwrap();
    let mom = |i: usize| -> i64 { s.state(i).iter().zip(s.modes()).map(|(&n, &m)| n as i64 * l.mode(m)[0] as i64).sum() };
    for (i, j, _) in h.triplets() {
        assert_eq!(mom(i), mom(j));
    }
    assert_eq!(h.max_hermitian_deviation(), 0.0);
}

#[test]
fn centered_observable_maps_to_excitation_form() {
    // U dΓ(Õ) U† = Σ_{p,q≠0} Õ_{pq} a†_p a_q + √N φ₊(ĝ)
    let l = MomentumLattice::new(1, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = 5;
    let mut mat = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in i..m {
            let z = if i == j {
                Complex64::new(rng.gen_range(-1.0..1.0), 0.0)
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            };
            mat[i * m + j] = z;
            mat[j * m + i] = z.conj();
        }
    }
    let o = Observable::build(&ObservableSpec::Matrix(mat), &l).unwrap();
    let n = 4;
    let s = SectorBasis::new(&l, n).unwrap();
    let c = CappedBasis::full(&l, n).unwrap();
    let map = ExcitationMap::new(&s, &c).unwrap();
    let lhs = map.conjugate(&one_body(&s, &l, o.centered()).unwrap());
    let b = one_body(&c, &l, o.centered()).unwrap();
    let phi = phi_plus(&c, &l, o.g_hat(), n).unwrap();
    let rhs = b.add(&phi.scaled((n as f64).sqrt()));
    assert!(lhs.sub(&rhs).max_abs() < 1e-12);
}

#[test]
fn modified_commutator() {
    // [b_p, b†_q] = δ_pq (1 − N₊/N) − a†_q a_p / N
    let l = MomentumLattice::new(1, 2).unwrap();
    let n = 4;
    let c = CappedBasis::full(&l, n).unwrap();
    let nplus = number_operator(&c);
    for p in l.excitation_modes() {
        for q in l.excitation_modes() {
            let bp = b_mode(&c, p, n);
            let bq_dag = b_mode(&c, q, n).adjoint();
            let comm = bp.matmul(&bq_dag).sub(&bq_dag.matmul(&bp));
            let mut ep = vec![Complex64::new(0.0, 0.0); l.len()];
            let mut eq = ep.clone();
            ep[p] = Complex64::new(1.0, 0.0);
            eq[q] = Complex64::new(1.0, 0.0);
            let aqap = a_dag_a(&c, &l, &eq, &ep).unwrap().scaled(1.0 / n as f64);
            let mut expect = aqap.scaled(-1.0);
            if p == q {
                let diag = SparseOperator::identity(c.dim()).sub(&nplus.scaled(1.0 / n as f64));
                expect = expect.add(&diag);
            }
            // rows with N₊ = N are outside the domain where both sides are defined
            let keep: Vec<usize> = (0..c.dim()).filter(|&i| c.total(i) < n).collect();
            let diff = comm.sub(&expect).submatrix(&keep);
            assert!(diff.max_abs() < 1e-14, "p={p} q={q}");
        }
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn b_bound(seed in any::<u64>()) {
        // ‖b(h)ξ‖ ≤ ‖h‖ ‖N₊^{1/2} ξ‖
        let l = MomentumLattice::new(1, 2).unwrap();
        let n = 4;
        let c = CappedBasis::full(&l, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = random_vec(&mut rng, l.len());
        h[l.zero_index()] = Complex64::new(0.0, 0.0);
        let xi = random_vec(&mut rng, c.dim());
        let bh = b_field(&c, &l, &h, n).unwrap();
        let lhs: f64 = bh.apply(&xi).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let hn: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nx: f64 = (0..c.dim()).map(|i| c.total(i) as f64 * xi[i].norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(lhs <= hn * nx * (1.0 + 1e-12));
        let bd = b_dag_field(&c, &l, &h, n).unwrap();
        prop_assert!(bd.sub(&bh.adjoint()).max_abs() < 1e-15);
    }

    #[test]
    fn excitation_map_preserves_norm(seed in any::<u64>()) {
        let l = MomentumLattice::new(1, 2).unwrap();
        let s = SectorBasis::new(&l, 3).unwrap();
        let c = CappedBasis::full(&l, 3).unwrap();
        let map = ExcitationMap::new(&s, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_vec(&mut rng, s.dim());
        let img = map.forward(&psi);
        let n1: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = img.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((n1 - n2).abs() <= 1e-14 * n1);
        prop_assert_eq!(map.backward(&img), psi);
    }

    #[test]
    fn sector_lookup_roundtrip(n in 0usize..6, p in 1i32..3) {
        let l = MomentumLattice::new(1, p).unwrap();
        let s = SectorBasis::new(&l, n).unwrap();
        for i in 0..s.dim() {
            prop_assert_eq!(s.index_of(s.state(i)), Some(i));
            prop_assert_eq!(s.total(i), n);
        }
    }
}
