use alloc::vec::Vec;

use num_complex::Complex64;

use super::compare::{clt_distance, theorem_bound_comparison, CltDistance, ComparisonTable};
use super::scgf::{cumulants, scgf, Scgf};
use super::tails::{chernoff_check, chernoff_holds, legendre, tail_probabilities, ChernoffCell, LegendrePoint, ObservableLaw, TailRow};
use crate::bogoliubov::{BogoliubovData, FConvention};
use crate::error::Error;
use crate::fock::{hamiltonian, one_body, SectorBasis, SparseOperator};
use crate::model::{MomentumLattice, Observable, Potential};
use crate::par::map_rows;
use crate::solver::{ground_state, SolverOptions};
use crate::stats::{extrapolate_inverse_n, Extrapolation};

/// Merge width of spectral measures built for the reports.
pub const LAW_RESOLUTION: f64 = 1e-9;

/// `ψ_N` together with `S = dΓ(Õ)` on the `N`-particle sector.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub particles: usize,
    pub energy: f64,
    pub gap: f64,
    pub degenerate: bool,
    pub psi: Vec<Complex64>,
    pub observable: SparseOperator,
}

impl SectorState {
    pub fn solve(
        lattice: &MomentumLattice,
        potential: &Potential,
        observable: &Observable,
        particles: usize,
        opts: &SolverOptions,
        basis_limit: usize,
    ) -> Result<Self, Error> {
        let basis = SectorBasis::with_limit(lattice, particles, basis_limit)?;
        let h = hamiltonian(&basis, lattice, potential)?;
        let gs = ground_state(&h, opts)?;
        Ok(Self {
            particles,
            energy: gs.energy,
            gap: gs.gap,
            degenerate: gs.degenerate,
            psi: gs.vector,
            observable: one_body(&basis, lattice, observable.centered())?,
        })
    }

    pub fn dim(&self) -> usize {
        self.psi.len()
    }

    /// `κ_k(S)/N`, `k = 1..=4`.
    pub fn cumulants(&self) -> [f64; 4] {
        cumulants(&self.psi, &self.observable, self.particles)
    }
}

/// All large-deviation outputs at one `N`.
///
/// `Λ_N(λ) = N⁻¹ ln⟨ψ_N, e^{λS}ψ_N⟩` carries the unnormalized sum `S` in
/// the exponent, so its small-`λ` limit is `λ²‖f‖²/2`. Tails refer to
/// `O_N = S/N`.
#[derive(Debug, Clone)]
pub struct LdpReport {
    pub particles: usize,
    pub energy: f64,
    pub gap: f64,
    pub scgf: Scgf,
    pub cumulants: [f64; 4],
    pub xs: Vec<f64>,
    pub tails: Vec<TailRow>,
    pub tails_monotone: bool,
    pub legendre: Vec<LegendrePoint>,
    /// `x²/(2‖f‖²)`.
    pub bogoliubov_rate: Vec<f64>,
    pub chernoff: Vec<ChernoffCell>,
    pub chernoff_holds: bool,
    pub comparison: ComparisonTable,
    pub clt: CltDistance,
    /// The tails and CLT distance come from the exact point measure.
    pub exact_law: bool,
    pub law_resolution: f64,
    pub convention: FConvention,
    pub f_norm_sq: f64,
}

impl LdpReport {
    pub fn variance_per_n(&self) -> f64 {
        self.cumulants[1]
    }

    /// Empirical rate at the largest grid `x` inside the comparison window.
    pub fn reference(&self) -> Option<(f64, f64)> {
        self.comparison
            .rows
            .iter()
            .filter(|r| r.in_window && r.empirical.is_finite())
            .map(|r| (r.x, r.empirical))
            .last()
    }
}

/// Observable-dependent constants shared by every `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdpTarget {
    pub convention: FConvention,
    pub f_norm_sq: f64,
    pub triple_norm: f64,
}

pub fn ldp_report(state: &SectorState, lambdas: &[f64], xs: &[f64], target: LdpTarget, opts: &SolverOptions) -> Result<LdpReport, Error> {
    let n = state.particles;
    let scgf = scgf(&state.psi, &state.observable, lambdas, n, opts)?;
    let law = ObservableLaw::new(&state.observable, &state.psi, opts, LAW_RESOLUTION)?;
    let tails = tail_probabilities(&law, n, xs);
    let mut sorted: Vec<&TailRow> = tails.iter().collect();
    sorted.sort_by(|a, b| a.x.total_cmp(&b.x));
    let tails_monotone = sorted.windows(2).all(|w| w[1].gt <= w[0].gt && w[1].ge <= w[0].ge);
    let chernoff = chernoff_check(&scgf.lambdas, &scgf.values, &tails);
    let rates: Vec<f64> = tails.iter().map(|t| t.rate).collect();
    Ok(LdpReport {
        particles: n,
        energy: state.energy,
        gap: state.gap,
        cumulants: state.cumulants(),
        legendre: legendre(&scgf.lambdas, &scgf.values, xs),
        bogoliubov_rate: xs.iter().map(|x| x * x / (2.0 * target.f_norm_sq)).collect(),
        chernoff_holds: chernoff_holds(&chernoff),
        chernoff,
        comparison: theorem_bound_comparison(xs, &rates, target.f_norm_sq, target.triple_norm),
        clt: clt_distance(&law, n, target.f_norm_sq),
        exact_law: law.is_exact(),
        law_resolution: law.resolution(),
        xs: xs.to_vec(),
        tails,
        tails_monotone,
        scgf,
        convention: target.convention,
        f_norm_sq: target.f_norm_sq,
    })
}

/// Limit of `Var/N` under each convention for `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConventionChoice {
    pub convention: FConvention,
    pub f_norm_sq: f64,
    /// `|extrapolated Var/N − ‖f‖²| / ‖f‖²` per convention, in
    /// [`FConvention::ALL`] order.
    pub relative_errors: Vec<(FConvention, f64)>,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub reports: Vec<LdpReport>,
    /// `None` with a single `N`.
    pub variance_limit: Option<Extrapolation>,
    /// Extrapolated `rate / (x²/(2‖f‖²))` at the reference `x`.
    pub ratio_limit: Option<Extrapolation>,
    pub reference_x: Option<f64>,
    pub choice: ConventionChoice,
    pub notice: Option<&'static str>,
}

pub const SWEEP_ORDER: usize = 2;

fn fit(ns: &[f64], ys: &[f64]) -> Option<Extrapolation> {
    if ns.len() < 2 {
        return None;
    }
    extrapolate_inverse_n(ns, ys, SWEEP_ORDER.min(ns.len() - 1))
}

impl SweepTable {
    /// `|Var/N − ‖f‖²|` strictly decreasing along the sweep.
    pub fn variance_error_decreasing(&self) -> bool {
        let e: Vec<f64> = self.reports.iter().map(|r| (r.variance_per_n() - self.choice.f_norm_sq).abs()).collect();
        e.windows(2).all(|w| w[1] < w[0])
    }

    pub fn clt_decreasing(&self) -> bool {
        self.reports.windows(2).all(|w| w[1].clt.distance < w[0].clt.distance)
    }

    /// Empirical rate over its quadratic prediction at the reference `x`,
    /// per `N`.
    pub fn reference_ratios(&self) -> Vec<f64> {
        let Some(x) = self.reference_x else { return Vec::new() };
        self.reports
            .iter()
            .map(|r| {
                r.comparison
                    .rows
                    .iter()
                    .find(|row| row.x == x)
                    .map_or(f64::NAN, |row| row.ratio)
            })
            .collect()
    }
}

/// Runs [`ldp_report`] along `ns` (ascending), extrapolates in `1/N` and
/// picks the convention for `f` whose `‖f‖²` the variance approaches.
#[allow(clippy::too_many_arguments)]
pub fn n_sweep(
    lattice: &MomentumLattice,
    potential: &Potential,
    observable: &Observable,
    ns: &[usize],
    lambdas: &[f64],
    xs: &[f64],
    opts: &SolverOptions,
    basis_limit: usize,
) -> Result<SweepTable, Error> {
    let states = map_rows(ns.len(), |i| SectorState::solve(lattice, potential, observable, ns[i], opts, basis_limit))
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;
    let nf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let variances: Vec<f64> = states.iter().map(|s| s.cumulants()[1]).collect();
    let variance_limit = fit(&nf, &variances);

    let bog = BogoliubovData::new(lattice, potential, observable);
    let limit = variance_limit.as_ref().map_or(*variances.last().unwrap_or(&0.0), |e| e.value);
    let relative_errors: Vec<(FConvention, f64)> = FConvention::ALL
        .iter()
        .map(|&c| {
            let f2 = bog.f_norm_sq(c);
            (c, (limit - f2).abs() / f2.max(f64::MIN_POSITIVE))
        })
        .collect();
    // ties go to the later entry, the reflected convention
    let convention = relative_errors
        .iter()
        .fold(relative_errors[0], |best, c| if c.1 <= best.1 { *c } else { best })
        .0;
    let target = LdpTarget {
        convention,
        f_norm_sq: bog.f_norm_sq(convention),
        triple_norm: observable.triple_norm(),
    };

    let reports = map_rows(states.len(), |i| ldp_report(&states[i], lambdas, xs, target, opts))
        .into_iter()
        .collect::<Result<Vec<_>, Error>>()?;
    let reference_x = reports.first().and_then(|r| r.reference()).map(|(x, _)| x);
    let mut table = SweepTable {
        reports,
        variance_limit,
        ratio_limit: None,
        reference_x,
        choice: ConventionChoice {
            convention,
            f_norm_sq: target.f_norm_sq,
            relative_errors,
        },
        notice: if ns.len() < 2 { Some("single N: extrapolation skipped") } else { None },
    };
    let ratios = table.reference_ratios();
    if ratios.iter().all(|r| r.is_finite()) {
        table.ratio_limit = fit(&nf, &ratios);
    }
    Ok(table)
}
