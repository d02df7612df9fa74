//! Prints one PASS/FAIL line per acceptance criterion. Every criterion
//! except A8 must pass; A8 is reported and known to fail at these sizes.

use mfbose_core::bogoliubov::{consistency_residuals, quasifree_ground_state, BogoliubovData, FConvention};
use mfbose_core::excitations::{excitation_identity, interpolation_diagnostics, verify_conjugation_identities, SmoothPath};
use mfbose_core::fock::{number_operator, quadratic_q, CappedBasis, ExcitationSetup, DEFAULT_BASIS_LIMIT};
use mfbose_core::ldp::{n_sweep, scgf, SectorState, SweepTable};
use mfbose_core::model::{MomentumLattice, Observable, ObservableSpec, Potential};
use mfbose_core::solver::{ground_state, SolverOptions};
use mfbose_core::Complex64;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn report(id: &'static str, passed: bool, detail: String) -> Verdict {
    println!("{id} {} {detail}", if passed { "PASS" } else { "FAIL" });
    Verdict { id, passed, detail }
}

fn cos_mode(l: &MomentumLattice) -> Observable {
    Observable::build(&ObservableSpec::CosMode([1, 0, 0]), l).unwrap()
}

fn a1() -> Verdict {
    let mut worst = 0.0f64;
    for cutoff in [1, 2] {
        let l = MomentumLattice::new(1, cutoff).unwrap();
        let v = Potential::shells(&l, &[1.0, 0.5, 0.25]).unwrap();
        for n in 2..=6 {
            let setup = ExcitationSetup::new(&l, &v, n).unwrap();
            worst = worst.max(excitation_identity(&setup, &l, &v).unwrap().residual);
        }
    }
    report("A1", worst <= 1e-10, format!("max relative residual {worst:.3e} (tol 1e-10)"))
}

fn a2() -> Verdict {
    let l = MomentumLattice::new(1, 1).unwrap();
    let o = cos_mode(&l);
    let opts = SolverOptions::default();
    let eig = SymmetricEigen::new(o.centered().clone());
    let z = l.zero_index();
    let lambdas: Vec<f64> = (0..=10).map(|i| 0.1 * i as f64).collect();
    let (mut scgf_err, mut var_err) = (0.0f64, 0.0f64);
    let mut condensate = true;
    for n in [2, 4, 8] {
        let st = SectorState::solve(&l, &Potential::zero(&l), &o, n, &opts, DEFAULT_BASIS_LIMIT).unwrap();
        condensate &= st.psi.iter().filter(|c| c.norm() > 1e-12).count() == 1;
        let s = scgf(&st.psi, &st.observable, &lambdas, n, &opts).unwrap();
        for (lam, got) in lambdas.iter().zip(&s.values) {
            let want: f64 = (0..eig.eigenvalues.len())
                .map(|k| eig.eigenvectors[(z, k)].norm_sqr() * (lam * eig.eigenvalues[k]).exp())
                .sum::<f64>()
                .ln();
            scgf_err = scgf_err.max((got - want).abs());
        }
        var_err = var_err.max((st.cumulants()[1] - o.g_norm_sq()).abs());
    }
    report(
        "A2",
        condensate && scgf_err <= 1e-10 && var_err <= 1e-12,
        format!("condensate state {condensate}, SCGF error {scgf_err:.3e} (tol 1e-10), Var/N error {var_err:.3e} (tol 1e-12)"),
    )
}

fn field(rng: &mut ChaCha8Rng, l: &MomentumLattice, norm: f64) -> Vec<Complex64> {
    let mut h: Vec<Complex64> = (0..l.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    h[l.zero_index()] = Complex64::new(0.0, 0.0);
    let n = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    h.iter().map(|z| z * (norm / n)).collect()
}

fn a3() -> Verdict {
    let l = MomentumLattice::new(1, 1).unwrap();
    let n = 4;
    let basis = CappedBasis::full(&l, n).unwrap();
    let opts = SolverOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failed = Vec::new();
    let mut worst = Vec::new();
    for trial in 0..3 {
        let h = field(&mut rng, &l, 0.3);
        let a = DMatrix::from_fn(l.len(), l.len(), |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let one_body = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let path = SmoothPath {
            h0: field(&mut rng, &l, 0.15),
            h1: field(&mut rng, &l, 0.1),
            h2: field(&mut rng, &l, 0.05),
        };
        for r in verify_conjugation_identities(&basis, &l, &h, &one_body, &path, 0.3, n, &opts).unwrap() {
            if trial == 0 {
                worst.push(format!("{} {:.1e}", r.name, r.residual));
            }
            if !r.passed() {
                failed.push(format!("{} {:.3e} > {:.0e}", r.name, r.residual, r.tolerance));
            }
        }
    }
    let detail = if failed.is_empty() { worst.join(", ") } else { failed.join(", ") };
    report("A3", failed.is_empty(), detail)
}

fn a4() -> Verdict {
    let mut worst = 0.0f64;
    for (cutoff, v) in [(1, vec![0.5]), (2, vec![1.0, 0.5, 0.25]), (3, vec![2.0, 1.0])] {
        let l = MomentumLattice::new(1, cutoff).unwrap();
        let v = Potential::shells(&l, &v).unwrap();
        let d = BogoliubovData::new(&l, &v, &cos_mode(&l));
        let r = consistency_residuals(&l, &v, &d.mu, &d.dispersion);
        worst = worst.max(r.coth).max(r.cosh).max(r.sinh).max(r.symplectic);
    }
    report("A4", worst <= 1e-12, format!("max residual {worst:.3e} (tol 1e-12)"))
}

fn a5() -> Verdict {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 0.5).unwrap();
    let d = BogoliubovData::new(&l, &v, &cos_mode(&l));
    let basis = CappedBasis::new(&l, 16, 8).unwrap();
    let gs = ground_state(&quadratic_q(&basis, &l, &v), &SolverOptions::default()).unwrap();
    let qf = quasifree_ground_state(&l, &d.mu, &basis);
    let overlap = gs.vector.iter().zip(&qf.vector).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm();
    let depletion = (number_operator(&basis).expectation(&qf.vector).re - d.depletion).abs();
    let hits: Vec<&str> = d
        .energy_candidates
        .iter()
        .filter(|c| (c.value - gs.energy).abs() <= 1e-8)
        .map(|c| c.label)
        .collect();
    report(
        "A5",
        !qf.cap_too_small && 1.0 - overlap <= 1e-8 && depletion <= 1e-8 && hits.len() == 1,
        format!("overlap defect {:.3e}, depletion error {depletion:.3e}, energy matches {hits:?}", 1.0 - overlap),
    )
}

fn weak_sweep() -> (SweepTable, f64) {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 0.5).unwrap();
    let o = cos_mode(&l);
    let lambdas: Vec<f64> = (0..=60).map(|i| 0.05 * i as f64).collect();
    let window = 0.5 * BogoliubovData::new(&l, &v, &o).f_norm_sq(FConvention::Reflected) / o.triple_norm();
    let mut xs: Vec<f64> = [0.25, 0.5, 0.75, 1.0].iter().map(|t| t * window).collect();
    xs.extend((0..=8).map(|i| 0.05 * i as f64));
    xs.sort_by(f64::total_cmp);
    let t = n_sweep(&l, &v, &o, &[4, 6, 8, 10, 12], &lambdas, &xs, &SolverOptions::default(), DEFAULT_BASIS_LIMIT).unwrap();
    (t, window)
}

fn a6(t: &SweepTable) -> Verdict {
    let f2 = t.choice.f_norm_sq;
    let limit = t.variance_limit.as_ref().map_or(f64::NAN, |e| e.value);
    let rel = (limit - f2).abs() / f2;
    report(
        "A6",
        t.variance_error_decreasing() && rel <= 0.05,
        format!(
            "errors decreasing {}, extrapolated Var/N {limit:.6} vs |f|^2 {f2:.6} ({} convention), relative error {rel:.3e} (tol 5e-2)",
            t.variance_error_decreasing(),
            t.choice.convention.label()
        ),
    )
}

fn a7(t: &SweepTable) -> Verdict {
    let cells: Vec<_> = t.reports.iter().flat_map(|r| &r.chernoff).collect();
    let worst = cells.iter().filter(|c| !c.vacuous).map(|c| c.margin).fold(f64::INFINITY, f64::min);
    let holds = t.reports.iter().all(|r| r.chernoff_holds);
    report("A7", holds && worst >= -1e-10, format!("{} cells, smallest margin {worst:.3e} (tol -1e-10)", cells.len()))
}

fn a8(t: &SweepTable, window: f64) -> Verdict {
    let limit = t.ratio_limit.as_ref().map_or(f64::NAN, |e| e.value);
    let exponent = t
        .reports
        .last()
        .and_then(|r| r.comparison.residual_exponent)
        .map_or(f64::NAN, |f| f.slope);
    report(
        "A8",
        (limit - 1.0).abs() <= 0.1,
        format!(
            "reference x {:?} in window (0, {window:.4}], ratios {:?}, extrapolated ratio {limit:.3} (target 1 within 0.1), residual exponent {exponent:.3} (reported)",
            t.reference_x,
            t.reference_ratios().iter().map(|r| (r * 10.0).round() / 10.0).collect::<Vec<_>>()
        ),
    )
}

fn a9(t: &SweepTable) -> Verdict {
    let d: Vec<f64> = t.reports.iter().map(|r| (r.clt.distance * 1e4).round() / 1e4).collect();
    report("A9", t.clt_decreasing(), format!("Kolmogorov distances {d:?}"))
}

fn a10() -> Verdict {
    let l = MomentumLattice::new(1, 1).unwrap();
    let v = Potential::constant(&l, 0.5).unwrap();
    let d = interpolation_diagnostics(&l, &v, &[0.0, 0.25, 0.5, 0.75, 1.0], &[4, 5, 6, 7, 8, 9, 10], &SolverOptions::default(), DEFAULT_BASIS_LIMIT).unwrap();
    let slopes: Vec<String> = d
        .moment_trends
        .iter()
        .map(|m| m.fit.map_or("-".into(), |f| format!("{:.2e}±{:.1e}", f.slope, f.slope_sigma)))
        .collect();
    report(
        "A10",
        d.min_gap > 0.0 && !d.moments_grow(),
        format!("min gap {:.4}, max <(N+ +1)^2> {:.4}, slopes {slopes:?}", d.min_gap, d.m2_bound),
    )
}

fn main() {
    let (sweep, window) = weak_sweep();
    let verdicts = [a1(), a2(), a3(), a4(), a5(), a6(&sweep), a7(&sweep), a8(&sweep, window), a9(&sweep), a10()];
    let unexpected: Vec<&Verdict> = verdicts.iter().filter(|v| !v.passed && v.id != "A8").collect();
    for v in &unexpected {
        eprintln!("unexpected failure {}: {}", v.id, v.detail);
    }
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
