//! Desk-scale numerics for the mean-field Bose gas on the torus.
//!
//! The crate builds the `N`-particle Hamiltonian on a truncated momentum
//! lattice, maps it to the Fock space of excitations orthogonal to the
//! condensate, and checks the exact operator identities that connect the
//! two pictures. On top of that it measures the large-deviation statistics
//! of centered one-body observables in the interacting ground state and
//! compares them with the Bogoliubov predictions.
//!
//! Layout:
//!
//! - [`model`]: momentum lattice, interaction potential, one-body observable.
//! - [`fock`]: occupation bases and sparse second-quantized operators.
//! - [`solver`]: Lanczos ground states, Krylov exponentials, spectral measures.
//! - [`bogoliubov`]: closed-form quadratic theory (`μ_p`, `E(p)`, `f`).
//! - [`excitations`]: interpolating Hamiltonians and identity checks.
//! - [`ldp`]: moment generating functions, tails, rate functions.
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature turns
//! on rayon-backed row parallelism for assembly and matrix-vector products.

#![no_std]

extern crate alloc;
#[cfg(feature = "parallel")]
extern crate std;

pub mod bogoliubov;
pub mod error;
pub mod excitations;
pub mod fock;
pub mod ldp;
pub mod model;
pub mod solver;
pub mod stats;

mod par;

pub use error::Error;
pub use num_complex::Complex64;

/// `(2π)²`, the squared length of the unit lattice momentum.
pub const TWO_PI_SQ: f64 = 4.0 * core::f64::consts::PI * core::f64::consts::PI;
