use alloc::vec::Vec;

use super::tails::ObservableLaw;
use crate::stats::{power_law_exponent, LinearFit};

/// Empirical rate against the quadratic leading term at one `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub x: f64,
    pub empirical: f64,
    /// `x²/(2‖f‖²)`.
    pub leading: f64,
    pub residual: f64,
    /// `empirical / leading`; NaN at `x = 0`.
    pub ratio: f64,
    pub in_window: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    /// Upper end of the small-`x` window, `0.5‖f‖²/⫴O⫴`.
    pub window: f64,
    /// Log-log fit of `|residual|` against `x` inside the window.
    pub residual_exponent: Option<LinearFit>,
}

pub fn reference_window(f_norm_sq: f64, triple_norm: f64) -> f64 {
    if triple_norm > 0.0 {
        0.5 * f_norm_sq / triple_norm
    } else {
        f64::INFINITY
    }
}

pub fn theorem_bound_comparison(xs: &[f64], rates: &[f64], f_norm_sq: f64, triple_norm: f64) -> ComparisonTable {
    let window = reference_window(f_norm_sq, triple_norm);
    let rows: Vec<ComparisonRow> = xs
        .iter()
        .zip(rates)
        .map(|(&x, &empirical)| {
            let leading = x * x / (2.0 * f_norm_sq);
            ComparisonRow {
                x,
                empirical,
                leading,
                residual: empirical - leading,
                ratio: if x != 0.0 { empirical / leading } else { f64::NAN },
                in_window: x > 0.0 && x <= window,
            }
        })
        .collect();
    let (x, y): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.in_window && r.residual.is_finite())
        .map(|r| (r.x, r.residual.abs()))
        .unzip();
    ComparisonTable {
        residual_exponent: power_law_exponent(&x, &y),
        rows,
        window,
    }
}

/// Kolmogorov distance of `S/√N` to a centered normal law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltDistance {
    pub distance: f64,
    /// Zero limiting variance: the distance is to the point mass at 0.
    pub degenerate: bool,
}

fn normal_cdf(y: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return if y >= 0.0 { 1.0 } else { 0.0 };
    }
    0.5 * (1.0 + libm::erf(y / (sigma * core::f64::consts::SQRT_2)))
}

// left limit, which differs from the value only for the point mass
fn normal_cdf_left(y: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return if y > 0.0 { 1.0 } else { 0.0 };
    }
    normal_cdf(y, sigma)
}

/// Points of the smoothed path's evaluation grid.
pub const CLT_GRID: usize = 4001;

pub fn clt_distance(law: &ObservableLaw, particles: usize, f_norm_sq: f64) -> CltDistance {
    let rn = libm::sqrt(particles as f64);
    let sigma = libm::sqrt(f_norm_sq.max(0.0));
    let degenerate = !(f_norm_sq > 0.0);
    let distance = match law {
        ObservableLaw::Exact(m) => {
            // the supremum is attained at an atom, from one side or the other
            let mut below = 0.0;
            let mut d = 0.0f64;
            for (&p, &w) in m.points.iter().zip(&m.weights) {
                let y = p / rn;
                d = d.max((below - normal_cdf_left(y, sigma)).abs());
                below += w;
                d = d.max((below - normal_cdf(y, sigma)).abs());
            }
            d
        }
        ObservableLaw::Smoothed(_) => {
            let half = if degenerate { 1.0 } else { 8.0 * sigma };
            (0..CLT_GRID)
                .map(|i| {
                    let y = -half + 2.0 * half * i as f64 / (CLT_GRID - 1) as f64;
                    (law.cdf(y * rn) - normal_cdf(y, sigma)).abs()
                })
                .fold(0.0, f64::max)
        }
    };
    CltDistance { distance, degenerate }
}
