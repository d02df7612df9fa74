//! The excitation Hamiltonian `G_N`, its interpolation to the quadratic
//! part, and matrix checks of the conjugation formulas used to analyse it.
//!
//! `G_N(s) = Q + s R_N` uses the operational remainder `R_N = G_N − Q`, so
//! the family hits `G_N` at `s = 1` by construction; the term-by-term
//! remainder is only compared against it.

mod diagnostics;
mod identities;
mod pathway;

pub use diagnostics::{interpolation_diagnostics, remainder_bound_constant, DiagnosticsCell, InterpolationDiagnostics, MomentTrend, TREND_FLOOR};
pub use identities::{
    derivative_identity, excitation_identity, field_conjugation_b, field_conjugation_dgamma, number_conjugations,
    verify_conjugation_identities, IdentityResidual, SmoothPath, CONJUGATION_TOL, DERIVATIVE_TOL, EXCITATION_TOL, PROP2_TOL,
};
pub use pathway::{mgf_pathway_check, PathwayReport, PathwayRow, PATHWAY_TOL};

use crate::fock::{ExcitationSetup, SparseOperator};

/// `G_N(s) = Q + s R_N`.
pub fn build_gn(setup: &ExcitationSetup, s: f64) -> SparseOperator {
    setup.interpolated(s)
}
