use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::fock::{
    a_dag_a, b_dag_field, b_field, b_mode, i_phi_minus, number_operator, one_body, phi_plus, remainder_transcribed, CappedBasis,
    ExcitationSetup, RemainderForm, SparseOperator,
};
use crate::model::{MomentumLattice, Potential};
use crate::solver::{expm_dense_columns, SolverOptions};

/// One checked identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    /// Max-entry norm of `lhs − rhs`, unless noted otherwise.
    pub residual: f64,
    /// Max-entry norm of the left side, for context.
    pub scale: f64,
    pub tolerance: f64,
}

impl IdentityResidual {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

pub const PROP2_TOL: f64 = 1e-10;
pub const CONJUGATION_TOL: f64 = 1e-8;
pub const DERIVATIVE_TOL: f64 = 1e-6;
pub const EXCITATION_TOL: f64 = 1e-10;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn dense(op: &SparseOperator) -> DMatrix<Complex64> {
    op.to_dense()
}

fn residual(name: &'static str, lhs: &DMatrix<Complex64>, rhs: &DMatrix<Complex64>, tolerance: f64) -> IdentityResidual {
    IdentityResidual {
        name,
        residual: max_entry(&(lhs - rhs)),
        scale: max_entry(lhs),
        tolerance,
    }
}

/// `‖U_N H_N U_N† − (N/2)v̂(0) − Q − R_N‖_F / ‖Q‖_F` with `R_N` assembled
/// term by term, so that `G_N` and `Q + R_N` are built independently.
pub fn excitation_identity(setup: &ExcitationSetup, lattice: &MomentumLattice, potential: &Potential) -> Result<IdentityResidual, Error> {
    let r = remainder_transcribed(&setup.capped, lattice, potential, setup.particles(), RemainderForm::Exact)?;
    let diff = setup.g.sub(&setup.q).sub(&r);
    let qn = setup.q.frobenius_norm();
    let dn = diff.frobenius_norm();
    Ok(IdentityResidual {
        name: "excitation identity",
        residual: if qn > 0.0 { dn / qn } else { dn },
        scale: qn,
        tolerance: EXCITATION_TOL,
    })
}

/// Conjugation of `b(h)`, `b†(h)`, `φ₊(h)` and `iφ₋(h)` by `e^{sN₊}`.
pub fn number_conjugations(basis: &CappedBasis, lattice: &MomentumLattice, h: &[Complex64], particles: usize, s: f64) -> Result<Vec<IdentityResidual>, Error> {
    let n_plus: Vec<f64> = (0..basis.dim()).map(|i| basis.total(i) as f64).collect();
    // e^{−sN₊} A e^{sN₊} is an entrywise rescaling
    let conj = |a: &SparseOperator| -> DMatrix<Complex64> {
        let mut d = dense(a);
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                d[(i, j)] *= libm::exp(s * (n_plus[j] - n_plus[i]));
            }
        }
        d
    };
    let bh = b_field(basis, lattice, h, particles)?;
    let bd = b_dag_field(basis, lattice, h, particles)?;
    let pp = phi_plus(basis, lattice, h, particles)?;
    let ipm = i_phi_minus(basis, lattice, h, particles)?;
    let (g, sg) = (libm::cosh(s), libm::sinh(s));
    Ok(alloc::vec![
        residual("number conjugation b", &conj(&bh), &(dense(&bh) * c(libm::exp(s))), PROP2_TOL),
        residual("number conjugation b*", &conj(&bd), &(dense(&bd) * c(libm::exp(-s))), PROP2_TOL),
        residual("number conjugation phi+", &conj(&pp), &(dense(&pp) * c(g) + dense(&ipm) * c(sg)), PROP2_TOL),
        residual("number conjugation i phi-", &conj(&ipm), &(dense(&ipm) * c(g) + dense(&pp) * c(sg)), PROP2_TOL),
    ])
}

// e^{±√N φ₊(h)} as dense matrices
fn field_exponentials(
    basis: &CappedBasis,
    lattice: &MomentumLattice,
    h: &[Complex64],
    particles: usize,
    opts: &SolverOptions,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), Error> {
    let x = phi_plus(basis, lattice, h, particles)?;
    let rn = libm::sqrt(particles as f64);
    Ok((expm_dense_columns(&x, rn, opts)?, expm_dense_columns(&x, -rn, opts)?))
}

fn norm_of(h: &[Complex64]) -> f64 {
    libm::sqrt(h.iter().map(|z| z.norm_sqr()).sum())
}

/// `e^{√Nφ₊(h)} b_p e^{−√Nφ₊(h)}` against its closed form, maximized over
/// excitation modes `p`.
pub fn field_conjugation_b(
    basis: &CappedBasis,
    lattice: &MomentumLattice,
    h: &[Complex64],
    particles: usize,
    opts: &SolverOptions,
) -> Result<IdentityResidual, Error> {
    let (e, ei) = field_exponentials(basis, lattice, h, particles, opts)?;
    let nf = particles as f64;
    let rn = libm::sqrt(nf);
    let nh = norm_of(h);
    let (g, s) = (libm::cosh(nh), libm::sinh(nh));
    let gm = (g - 1.0) / (nh * nh);
    let dim = basis.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let np = dense(&number_operator(basis));
    let bd = dense(&b_dag_field(basis, lattice, h, particles)?);
    let ipm = dense(&i_phi_minus(basis, lattice, h, particles)?);
    let aha = dense(&a_dag_a(basis, lattice, h, h)?);
    let mut out = IdentityResidual {
        name: "field conjugation b_p",
        residual: 0.0,
        scale: 0.0,
        tolerance: CONJUGATION_TOL,
    };
    for p in lattice.excitation_modes() {
        let hp = h[p];
        let bp = dense(&b_mode(basis, p, particles));
        let mut ep = alloc::vec![Complex64::new(0.0, 0.0); lattice.len()];
        ep[p] = c(1.0);
        let ah_ap = dense(&a_dag_a(basis, lattice, h, &ep)?);
        let lhs = &e * &bp * &ei;
        let rhs = &bp * c(g) + &ipm * (hp * g * gm) - &bd * (hp * gm) - (&id - &np * c(1.0 / nf)) * (hp * rn * g * s / nh)
            + &aha * (hp * s / nh * gm / rn)
            + ah_ap * c(s / nh / rn);
        let r = residual(out.name, &lhs, &rhs, CONJUGATION_TOL);
        out.residual = out.residual.max(r.residual);
        out.scale = out.scale.max(r.scale);
    }
    Ok(out)
}

/// `e^{√Nφ₊(h)} dΓ(H) e^{−√Nφ₊(h)}` against its closed form; `one_body_h`
/// is a Hermitian lattice-indexed matrix whose excitation block is used.
pub fn field_conjugation_dgamma(
    basis: &CappedBasis,
    lattice: &MomentumLattice,
    h: &[Complex64],
    one_body_h: &DMatrix<Complex64>,
    particles: usize,
    opts: &SolverOptions,
) -> Result<IdentityResidual, Error> {
    let (e, ei) = field_exponentials(basis, lattice, h, particles, opts)?;
    let nf = particles as f64;
    let rn = libm::sqrt(nf);
    let nh = norm_of(h);
    let (g, s) = (libm::cosh(nh), libm::sinh(nh));
    let gm = (g - 1.0) / (nh * nh);
    let z = lattice.zero_index();
    // H restricted to excitation modes
    let mut hm = one_body_h.clone();
    for k in 0..lattice.len() {
        hm[(z, k)] = Complex64::new(0.0, 0.0);
        hm[(k, z)] = Complex64::new(0.0, 0.0);
    }
    let hh: Vec<Complex64> = (0..lattice.len()).map(|i| (0..lattice.len()).map(|j| hm[(i, j)] * h[j]).sum()).collect();
    let hhh: Complex64 = h.iter().zip(&hh).map(|(a, b)| a.conj() * b).sum();
    let dim = basis.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let np = dense(&number_operator(basis));
    let dg = dense(&one_body(basis, lattice, &hm)?);
    let ipm_hh = dense(&i_phi_minus(basis, lattice, &hh, particles)?);
    let ipm_h = dense(&i_phi_minus(basis, lattice, h, particles)?);
    let mixed = dense(&a_dag_a(basis, lattice, h, &hh)?) + dense(&a_dag_a(basis, lattice, &hh, h)?);
    let aha = dense(&a_dag_a(basis, lattice, h, h)?);
    let lhs = &e * &dg * &ei;
    let rhs = &dg + ipm_hh * c(rn * s / nh) - (&id - &np * c(1.0 / nf)) * (hhh * nf * s * s / (nh * nh))
        + mixed * c(gm)
        + ipm_h * (hhh * rn * s / nh * gm)
        + aha * (hhh * gm * gm);
    Ok(residual("field conjugation dGamma", &lhs, &rhs, CONJUGATION_TOL))
}

/// A smooth path `h_t = h₀ cos t + i t h₁ + t² h₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothPath {
    pub h0: Vec<Complex64>,
    pub h1: Vec<Complex64>,
    pub h2: Vec<Complex64>,
}

impl SmoothPath {
    pub fn at(&self, t: f64) -> Vec<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        (0..self.h0.len())
            .map(|k| self.h0[k] * libm::cos(t) + i * t * self.h1[k] + self.h2[k] * (t * t))
            .collect()
    }

    pub fn derivative(&self, t: f64) -> Vec<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        (0..self.h0.len())
            .map(|k| -self.h0[k] * libm::sin(t) + i * self.h1[k] + self.h2[k] * (2.0 * t))
            .collect()
    }
}

/// `(∂_t e^{√Nφ₊(h_t)}) e^{−√Nφ₊(h_t)}` by central differences, against
/// its closed form. The residual is that of the Richardson-combined
/// difference; `scale` carries the plain central-difference residual.
pub fn derivative_identity(
    basis: &CappedBasis,
    lattice: &MomentumLattice,
    path: &SmoothPath,
    t: f64,
    step: f64,
    particles: usize,
    opts: &SolverOptions,
) -> Result<IdentityResidual, Error> {
    let nf = particles as f64;
    let rn = libm::sqrt(nf);
    let expo = |tt: f64, sign: f64| -> Result<DMatrix<Complex64>, Error> {
        let x = phi_plus(basis, lattice, &path.at(tt), particles)?;
        Ok(expm_dense_columns(&x, sign * rn, opts)?)
    };
    let ei = expo(t, -1.0)?;
    let diff = |eps: f64| -> Result<DMatrix<Complex64>, Error> { Ok((expo(t + eps, 1.0)? - expo(t - eps, 1.0)?) * c(0.5 / eps) * &ei) };
    let d1 = diff(step)?;
    let d2 = diff(2.0 * step)?;
    let richardson = (&d1 * c(4.0) - &d2) * c(1.0 / 3.0);

    let h = path.at(t);
    let dh = path.derivative(t);
    let nh = norm_of(&h);
    let (g, s) = (libm::cosh(nh), libm::sinh(nh));
    let gm = (g - 1.0) / (nh * nh);
    let ip: Complex64 = dh.iter().zip(&h).map(|(a, b)| a.conj() * b).sum();
    let i = Complex64::new(0.0, 1.0);
    let dim = basis.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let np = dense(&number_operator(basis));
    let phi_dh = dense(&phi_plus(basis, lattice, &dh, particles)?);
    let phi_h = dense(&phi_plus(basis, lattice, &h, particles)?);
    // φ₋(h) = −i·iφ₋(h)
    let phim_h = dense(&i_phi_minus(basis, lattice, &h, particles)?) * (-i);
    let aha = dense(&a_dag_a(basis, lattice, &h, &h)?);
    let mixed = dense(&a_dag_a(basis, lattice, &h, &dh)?) - dense(&a_dag_a(basis, lattice, &dh, &h)?);
    let rhs = phi_dh * c(rn * s / nh) - phim_h * c(rn * s / nh * gm * ip.im) - phi_h * c(rn * (s - nh) / (nh * nh * nh) * ip.re)
        - (&id - &np * c(1.0 / nf)) * (i * nf * s * s / (nh * nh) * ip.im)
        + aha * (i * gm * gm * ip.im)
        + mixed * c(gm);
    Ok(IdentityResidual {
        name: "field derivative",
        residual: max_entry(&(&richardson - &rhs)),
        scale: max_entry(&(&d1 - &rhs)),
        tolerance: DERIVATIVE_TOL,
    })
}

/// Every conjugation identity at one `(h, s, N)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_conjugation_identities(
    basis: &CappedBasis,
    lattice: &MomentumLattice,
    h: &[Complex64],
    one_body_h: &DMatrix<Complex64>,
    path: &SmoothPath,
    s: f64,
    particles: usize,
    opts: &SolverOptions,
) -> Result<Vec<IdentityResidual>, Error> {
    let mut out = number_conjugations(basis, lattice, h, particles, s)?;
    out.push(field_conjugation_b(basis, lattice, h, particles, opts)?);
    out.push(field_conjugation_dgamma(basis, lattice, h, one_body_h, particles, opts)?);
    out.push(derivative_identity(basis, lattice, path, 0.4, 1e-5, particles, opts)?);
    Ok(out)
}
