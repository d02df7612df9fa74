use mfbose_core::bogoliubov::FConvention;
use mfbose_core::fock::DEFAULT_BASIS_LIMIT;
use mfbose_core::ldp::{
    chernoff_check, chernoff_holds, ldp_report, legendre, n_sweep, scgf, tail_probabilities, theorem_bound_comparison, LdpTarget,
    ObservableLaw, SectorState, LAW_RESOLUTION,
};
use mfbose_core::model::{MomentumLattice, Observable, ObservableSpec, Potential};
use mfbose_core::solver::SolverOptions;
use mfbose_core::Complex64;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Law of `Õ` in the condensate mode: eigenvalues and weights.
fn single_particle_law(l: &MomentumLattice, o: &Observable) -> (Vec<f64>, Vec<f64>) {
    let eig = SymmetricEigen::new(o.centered().clone());
    let z = l.zero_index();
    let w = (0..eig.eigenvalues.len()).map(|k| eig.eigenvectors[(z, k)].norm_sqr()).collect();
    (eig.eigenvalues.iter().copied().collect(), w)
}

fn random_observable(rng: &mut ChaCha8Rng, l: &MomentumLattice) -> Observable {
    let m = l.len();
    let a = DMatrix::from_fn(m, m, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    Observable::build(&ObservableSpec::Matrix(h.transpose().iter().copied().collect()), l).unwrap()
}

fn target(f_norm_sq: f64, o: &Observable) -> LdpTarget {
    LdpTarget {
        convention: FConvention::Reflected,
        f_norm_sq,
        triple_norm: o.triple_norm(),
    }
}

fn grid(step: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|i| i as f64 * step).collect()
}

#[test]
fn free_gas_generating_function_factorizes() {
    let l = MomentumLattice::new(1, 2).unwrap();
    let v = Potential::zero(&l);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = SolverOptions::default();
    for o in [Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap(), random_observable(&mut rng, &l)] {
        let (e, w) = single_particle_law(&l, &o);
        let lambdas = grid(0.1, 10);
        for n in [2, 4, 7] {
            let st = SectorState::solve(&l, &v, &o, n, &opts, DEFAULT_BASIS_LIMIT).unwrap();
            // condensate basis state
            assert!(st.psi.iter().filter(|z| z.norm() > 1e-12).count() == 1);
            let s = scgf(&st.psi, &st.observable, &lambdas, n, &opts).unwrap();
            for (lam, got) in lambdas.iter().zip(&s.values) {
                let want = e.iter().zip(&w).map(|(x, p)| p * (lam * x).exp()).sum::<f64>().ln();
                assert!((got - want).abs() <= 1e-10, "N={n} λ={lam}: {got} vs {want}");
            }
            let k = st.cumulants();
            assert!(k[0].abs() < 1e-12);
            assert!((k[1] - o.g_norm_sq()).abs() <= 1e-12, "{} vs {}", k[1], o.g_norm_sq());
        }
    }
}

#[test]
fn cos_mode_free_variance_is_one_half() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let st = SectorState::solve(&l, &Potential::zero(&l), &o, 6, &SolverOptions::default(), DEFAULT_BASIS_LIMIT).unwrap();
    assert!((st.cumulants()[1] - 0.5).abs() < 1e-14);
}

#[test]
fn second_cumulant_matches_curvature() {
    let l = MomentumLattice::new(1, 2).unwrap();
    let v = Potential::shells(&l, &[1.0, 0.5, 0.25]).unwrap();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let opts = SolverOptions::default();
    let st = SectorState::solve(&l, &v, &o, 6, &opts, DEFAULT_BASIS_LIMIT).unwrap();
    let h = 1e-3;
    let s = scgf(&st.psi, &st.observable, &[-h, 0.0, h], 6, &opts).unwrap();
    let curvature = (s.values[0] - 2.0 * s.values[1] + s.values[2]) / (h * h);
    let k2 = st.cumulants()[1];
    assert!((curvature - k2).abs() <= 1e-6 * k2, "{curvature} vs {k2}");
    // second moment computed directly
    let sp = st.observable.apply(&st.psi);
    let m1: f64 = st.psi.iter().zip(&sp).map(|(a, b)| (a.conj() * b).re).sum();
    let m2: f64 = sp.iter().map(|z| z.norm_sqr()).sum();
    assert!(((m2 - m1 * m1) / 6.0 - k2).abs() < 1e-12);
}

#[test]
fn free_tails_match_sampling() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let o = random_observable(&mut rng, &l);
    let n = 6;
    let opts = SolverOptions::default();
    let st = SectorState::solve(&l, &Potential::zero(&l), &o, n, &opts, DEFAULT_BASIS_LIMIT).unwrap();
    let law = ObservableLaw::new(&st.observable, &st.psi, &opts, LAW_RESOLUTION).unwrap();
    let (e, w) = single_particle_law(&l, &o);
    let xs = [-0.31, -0.07, 0.013, 0.11, 0.29];
    let tails = tail_probabilities(&law, n, &xs);
    let samples = 40_000;
    let mut hits = [0usize; 5];
    for _ in 0..samples {
        let mut s = 0.0;
        for _ in 0..n {
            let mut u: f64 = rng.gen();
            let mut k = 0;
            while k + 1 < w.len() && u >= w[k] {
                u -= w[k];
                k += 1;
            }
            s += e[k];
        }
        for (h, x) in hits.iter_mut().zip(&xs) {
            if s > n as f64 * x {
                *h += 1;
            }
        }
    }
    for (t, h) in tails.iter().zip(hits) {
        let p = h as f64 / samples as f64;
        let sigma = (t.gt * (1.0 - t.gt) / samples as f64).sqrt().max(1e-4);
        assert!((p - t.gt).abs() <= 3.0 * sigma, "x={}: exact {} sampled {p}", t.x, t.gt);
    }
}

#[test]
fn trivial_tails() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 0.5).unwrap();
    let opts = SolverOptions::default();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let st = SectorState::solve(&l, &v, &o, 5, &opts, DEFAULT_BASIS_LIMIT).unwrap();
    let law = ObservableLaw::new(&st.observable, &st.psi, &opts, LAW_RESOLUTION).unwrap();
    let top = law.measure().unwrap().max_point().unwrap() / 5.0;
    let t = tail_probabilities(&law, 5, &[top + 1e-6, top + 1.0]);
    assert!(t.iter().all(|r| r.gt == 0.0 && r.ge == 0.0 && r.rate.is_infinite()));

    let zero = Observable::build(&ObservableSpec::Matrix(vec![Complex64::new(0.0, 0.0); 9]), &l).unwrap();
    let st = SectorState::solve(&l, &v, &zero, 5, &opts, DEFAULT_BASIS_LIMIT).unwrap();
    let r = ldp_report(&st, &[0.0, 0.5], &[0.1, 0.2], target(0.0, &zero), &opts).unwrap();
    assert!(r.tails.iter().all(|t| t.gt == 0.0));
    assert!(r.chernoff.iter().all(|c| c.vacuous) && r.chernoff_holds);
    assert!(r.clt.degenerate && r.clt.distance == 0.0);
    assert_eq!(r.cumulants, [0.0; 4]);
}

#[test]
fn free_chernoff_margins() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let opts = SolverOptions::default();
    let st = SectorState::solve(&l, &Potential::zero(&l), &o, 8, &opts, DEFAULT_BASIS_LIMIT).unwrap();
    let r = ldp_report(&st, &grid(0.05, 80), &grid(0.025, 24), target(0.5, &o), &opts).unwrap();
    for c in &r.chernoff {
        assert!(c.margin >= 0.0, "{c:?}");
    }
    // the Legendre transform vanishes at the mean and grows beyond it
    assert!(r.legendre[0].value.abs() < 1e-14);
    assert!(r.legendre.windows(2).all(|w| w[1].value >= w[0].value));
    assert!(r.scgf.convex && r.tails_monotone);
}

#[test]
fn smoothed_path_tracks_exact_law() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 0.5).unwrap();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let st = SectorState::solve(&l, &v, &o, 10, &SolverOptions::default(), DEFAULT_BASIS_LIMIT).unwrap();
    let exact = ObservableLaw::new(&st.observable, &st.psi, &SolverOptions::default(), LAW_RESOLUTION).unwrap();
    let small = SolverOptions {
        dense_limit: 3,
        ..SolverOptions::default()
    };
    let smoothed = ObservableLaw::new(&st.observable, &st.psi, &small, LAW_RESOLUTION).unwrap();
    assert!(exact.is_exact() && !smoothed.is_exact());
    // midpoints between atoms spaced 1/√2 apart
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for k in -4..4 {
        let s = (k as f64 + 0.5) * h;
        assert!((exact.cdf(s) - smoothed.cdf(s)).abs() < 0.02, "{s}: {} vs {}", exact.cdf(s), smoothed.cdf(s));
    }
}

#[test]
fn clt_distance_shrinks() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let opts = SolverOptions::default();
    for v in [Potential::zero(&l), Potential::constant(&l, 0.5).unwrap()] {
        let t = n_sweep(&l, &v, &o, &[4, 6, 8, 10], &[0.0, 0.5], &[0.1], &opts, DEFAULT_BASIS_LIMIT).unwrap();
        assert!(t.clt_decreasing(), "{:?}", t.reports.iter().map(|r| r.clt.distance).collect::<Vec<_>>());
    }
}

#[test]
fn sweep_variance() {
    let l = MomentumLattice::new(1, 1).unwrap();
    let o = Observable::build(&ObservableSpec::CosMode([1, 0, 0]), &l).unwrap();
    let opts = SolverOptions::default();
    let free = n_sweep(&l, &Potential::zero(&l), &o, &[2, 3, 5], &[0.0], &[0.0], &opts, DEFAULT_BASIS_LIMIT).unwrap();
    assert!(free.reports.iter().all(|r| (r.variance_per_n() - 0.5).abs() < 1e-14));

    let v = Potential::constant(&l, 0.5).unwrap();
    let t = n_sweep(&l, &v, &o, &[4, 6, 8, 10, 12], &[0.0], &[0.0], &opts, DEFAULT_BASIS_LIMIT).unwrap();
    let f2 = t.choice.f_norm_sq;
    assert!(t.variance_error_decreasing());
    assert!((t.variance_limit.as_ref().unwrap().value - f2).abs() <= 0.05 * f2);
    // even observable: both conventions give the same norm, reflected wins the tie
    assert_eq!(t.choice.convention, FConvention::Reflected);

    let single = n_sweep(&l, &v, &o, &[4], &[0.0], &[0.0], &opts, DEFAULT_BASIS_LIMIT).unwrap();
    assert!(single.variance_limit.is_none() && single.notice.is_some());
}

#[test]
fn residual_exponent_of_cubic_correction() {
    let xs: Vec<f64> = (1..=8).map(|i| i as f64 * 0.01).collect();
    let rates: Vec<f64> = xs.iter().map(|x| x * x / (2.0 * 0.5) + 0.3 * x.powi(3)).collect();
    let t = theorem_bound_comparison(&xs, &rates, 0.5, 1.0);
    assert!((t.residual_exponent.unwrap().slope - 3.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn report_invariants(seed in any::<u64>(), scale in 0.0f64..3.0, n in 2usize..7) {
        let l = MomentumLattice::new(1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Potential::shells(&l, &[scale, scale * rng.gen::<f64>(), scale * rng.gen::<f64>()]).unwrap();
        let o = random_observable(&mut rng, &l);
        let opts = SolverOptions::default();
        let st = SectorState::solve(&l, &v, &o, n, &opts, DEFAULT_BASIS_LIMIT).unwrap();
        let lambdas = grid(0.1, 20);
        let xs: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.1).collect();
        let r = ldp_report(&st, &lambdas, &xs, target(1.0, &o), &opts).unwrap();
        prop_assert_eq!(r.scgf.values[0], 0.0);
        prop_assert!(r.scgf.convex, "{}", r.scgf.min_second_difference);
        prop_assert!(r.tails_monotone);
        prop_assert!(chernoff_holds(&r.chernoff));
        let cells = chernoff_check(&r.scgf.lambdas, &r.scgf.values, &r.tails);
        prop_assert!(cells.iter().all(|c| c.margin >= -1e-10));
        let lg = legendre(&r.scgf.lambdas, &r.scgf.values, &xs);
        prop_assert!(lg.iter().all(|p| p.value >= 0.0));
    }
}
