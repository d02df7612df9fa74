//! Occupation-number bases and sparse second-quantized operators.
//!
//! Conventions: `dΓ(M) = Σ M_{p,q} a†_p a_q`, `b_p = √((N−N₊)/N) a_p`,
//! `b(h) = Σ conj(h_p) b_p`, `b†(h) = Σ h_p b†_p`, `φ₊ = b† + b` and
//! `iφ₋ = b − b†`. Coefficient vectors `h` are indexed by lattice modes.

mod basis;
mod excitation;
mod ladder;
mod operators;
mod sparse;

pub use basis::{CappedBasis, OccupationBasis, SectorBasis, DEFAULT_BASIS_LIMIT};
pub use excitation::{ExcitationMap, ExcitationSetup};
pub use ladder::{assemble, assemble_hermitian, b, b_dag, Ladder, Term};
pub use operators::{
    a_dag_a, a_mode, b_dag_field, b_field, b_mode, hamiltonian, i_phi_minus, kinetic, number_function, number_operator,
    one_body, phi_minus, phi_plus, quadratic_q, remainder_transcribed, RemainderForm,
};
pub use sparse::SparseOperator;
