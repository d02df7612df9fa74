//! Least-squares fits used by the convergence sweeps.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

/// Ordinary least squares `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; infinite with fewer than three points.
    pub slope_sigma: f64,
    pub intercept_sigma: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (slope_sigma, intercept_sigma) = if n > 2 {
        let rss: f64 = x.iter().zip(y).map(|(a, b)| libm::pow(b - intercept - slope * a, 2.0)).sum();
        let s2 = rss / (nf - 2.0);
        let sx2: f64 = x.iter().map(|a| a * a).sum();
        (libm::sqrt(s2 / sxx), libm::sqrt(s2 * sx2 / (nf * sxx)))
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    Some(LinearFit {
        slope,
        intercept,
        slope_sigma,
        intercept_sigma,
    })
}

/// Exponent `a` of `y ≈ c·xᵃ` from a log-log fit; points with
/// non-positive coordinates are skipped.
pub fn power_law_exponent(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (libm::log(*a), libm::log(*b)))
        .unzip();
    linear_fit(&lx, &ly)
}

/// Polynomial extrapolation of `y(N)` to `N → ∞` in the variable `1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    /// Limit value, the constant coefficient.
    pub value: f64,
    /// Coefficients of `1, 1/N, 1/N², …`.
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
    /// Difference between this limit and the one of the next lower order;
    /// a crude stability indicator.
    pub order_shift: f64,
}

/// Least-squares fit of degree `order` in `1/N`. With `order + 1` points
/// this is Richardson extrapolation.
pub fn extrapolate_inverse_n(ns: &[f64], values: &[f64], order: usize) -> Option<Extrapolation> {
    let value_and_fit = |ord: usize| -> Option<(Vec<f64>, f64)> {
        let m = ns.len();
        if m < ord + 1 || m != values.len() {
            return None;
        }
        let a = DMatrix::from_fn(m, ord + 1, |i, j| libm::pow(1.0 / ns[i], j as f64));
        let b = DVector::from_column_slice(values);
        let coef = a.clone().svd(true, true).solve(&b, 1e-14).ok()?;
        let resid = &a * &coef - &b;
        let rms = libm::sqrt(resid.norm_squared() / m as f64);
        Some((coef.iter().copied().collect(), rms))
    };
    let (coefficients, rms_residual) = value_and_fit(order)?;
    let order_shift = if order > 0 {
        value_and_fit(order - 1).map(|(c, _)| coefficients[0] - c[0]).unwrap_or(f64::NAN)
    } else {
        0.0
    };
    Some(Extrapolation {
        value: coefficients[0],
        coefficients,
        rms_residual,
        order_shift,
    })
}
