use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Error;
use crate::fock::{number_function, ExcitationSetup};
use crate::model::{MomentumLattice, Potential};
use crate::par::map_rows;
use crate::solver::{ground_state, SolverOptions};
use crate::stats::{linear_fit, LinearFit};

/// Ground-state data of `G_N(s)` at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsCell {
    pub s: f64,
    pub particles: usize,
    pub energy: f64,
    pub gap: f64,
    /// `⟨N₊ + 1⟩`.
    pub m1: f64,
    /// `⟨(N₊ + 1)²⟩`.
    pub m2: f64,
    /// `‖R_N ψ‖`.
    pub remainder_norm: f64,
    pub degenerate: bool,
}

/// Relative change across the `N` range below which a moment trend is
/// treated as flat.
pub const TREND_FLOOR: f64 = 1e-9;

/// Trend of `⟨(N₊+1)²⟩` against `N` at fixed `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTrend {
    pub s: f64,
    pub fit: Option<LinearFit>,
    /// Slope exceeds twice its standard error and the rise exceeds
    /// [`TREND_FLOOR`].
    pub growing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationDiagnostics {
    /// Ordered by `N`, then `s`.
    pub cells: Vec<DiagnosticsCell>,
    pub min_gap: f64,
    /// Some gap fell below half its `s = 0` value at the same `N`.
    pub gap_dip: bool,
    pub moment_trends: Vec<MomentTrend>,
    /// Largest `⟨(N₊+1)²⟩` over the grid.
    pub m2_bound: f64,
    /// Largest gap change between neighbouring `s`, per `N`.
    pub max_gap_jump: Vec<(usize, f64)>,
}

impl InterpolationDiagnostics {
    pub fn moments_grow(&self) -> bool {
        self.moment_trends.iter().any(|t| t.growing)
    }
}

fn cells_for(setup: &ExcitationSetup, s_grid: &[f64], opts: &SolverOptions) -> Result<Vec<DiagnosticsCell>, Error> {
    let n = setup.particles();
    let shifted = number_function(&setup.capped, |x| x + 1.0);
    s_grid
        .iter()
        .map(|&s| {
            let op = setup.interpolated(s);
            let gs = ground_state(&op, opts)?;
            let v = &gs.vector;
            let w = shifted.apply(v);
            let m1 = dot_re(v, &w);
            let m2 = dot_re(&w, &w);
            let r = setup.remainder.apply(v);
            Ok(DiagnosticsCell {
                s,
                particles: n,
                energy: gs.energy,
                gap: gs.gap,
                m1,
                m2,
                remainder_norm: libm::sqrt(dot_re(&r, &r)),
                degenerate: gs.degenerate,
            })
        })
        .collect()
}

fn dot_re(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Ground state, gap, `(N₊+1)` moments and `‖R_N ψ‖` of `G_N(s) = Q + sR_N`
/// over the `(s, N)` grid.
pub fn interpolation_diagnostics(
    lattice: &MomentumLattice,
    potential: &Potential,
    s_grid: &[f64],
    n_list: &[usize],
    opts: &SolverOptions,
    basis_limit: usize,
) -> Result<InterpolationDiagnostics, Error> {
    let per_n: Vec<Result<Vec<DiagnosticsCell>, Error>> = map_rows(n_list.len(), |k| {
        let setup = ExcitationSetup::with_limit(lattice, potential, n_list[k], basis_limit)?;
        cells_for(&setup, s_grid, opts)
    });
    let mut cells = Vec::new();
    let mut gap_dip = false;
    let mut max_gap_jump = Vec::new();
    for (rows, &n) in per_n.into_iter().zip(n_list) {
        let rows = rows?;
        if let Some(g0) = rows.iter().find(|c| c.s == 0.0).map(|c| c.gap) {
            gap_dip |= rows.iter().any(|c| c.gap < 0.5 * g0);
        }
        let mut by_s: Vec<&DiagnosticsCell> = rows.iter().collect();
        by_s.sort_by(|a, b| a.s.total_cmp(&b.s));
        let jump = by_s.windows(2).map(|w| (w[1].gap - w[0].gap).abs()).fold(0.0, f64::max);
        max_gap_jump.push((n, jump));
        cells.extend(rows);
    }
    let min_gap = cells.iter().map(|c| c.gap).fold(f64::INFINITY, f64::min);
    let m2_bound = cells.iter().map(|c| c.m2).fold(0.0, f64::max);
    let moment_trends = s_grid
        .iter()
        .map(|&s| {
            let (x, y): (Vec<f64>, Vec<f64>) = cells.iter().filter(|c| c.s == s).map(|c| (c.particles as f64, c.m2)).unzip();
            let fit = linear_fit(&x, &y);
            // a rise below the resolution floor across the whole N range is
            // round-off in an N-independent moment, whatever its σ
            let span = x.iter().fold(0.0f64, |m, v| m.max(*v)) - x.iter().fold(f64::INFINITY, |m, v| m.min(*v));
            let level = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let growing = fit.is_some_and(|f| f.slope > 2.0 * f.slope_sigma && f.slope * span > TREND_FLOOR * level);
            MomentTrend { s, fit, growing }
        })
        .collect();
    Ok(InterpolationDiagnostics {
        cells,
        min_gap,
        gap_dip,
        moment_trends,
        m2_bound,
        max_gap_jump,
    })
}

/// Smallest `c` with `‖R_N ψ‖ ≤ c N^{−1/2} ‖(N₊+1)^{3/2} ψ‖` over the given
/// states.
pub fn remainder_bound_constant(setup: &ExcitationSetup, samples: &[Vec<Complex64>]) -> f64 {
    let weight = number_function(&setup.capped, |x| libm::pow(x + 1.0, 1.5));
    let rn = libm::sqrt(setup.particles() as f64);
    samples
        .iter()
        .map(|psi| {
            let r = setup.remainder.apply(psi);
            let w = weight.apply(psi);
            rn * libm::sqrt(dot_re(&r, &r)) / libm::sqrt(dot_re(&w, &w))
        })
        .fold(0.0, f64::max)
}
