//! Momentum lattice, interaction potential and one-body observable.

mod lattice;
mod observable;
mod potential;

pub use lattice::{MomentumLattice, ModeVec};
pub use observable::{hermitize, largest_singular_value, Observable, ObservableSpec, HERMITIAN_TOL};
pub use potential::{shell_radii, Potential};
