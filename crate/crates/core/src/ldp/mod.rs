//! Large-deviation statistics of `S = dΓ(Õ)` in the interacting ground
//! state: generating function, cumulants, exact tails, Legendre transform,
//! Chernoff margins and comparisons with the Bogoliubov predictions.

mod compare;
mod report;
mod scgf;
mod tails;

pub use compare::{clt_distance, reference_window, theorem_bound_comparison, CltDistance, ComparisonRow, ComparisonTable, CLT_GRID};
pub use report::{
    ldp_report, n_sweep, ConventionChoice, LdpReport, LdpTarget, SectorState, SweepTable, LAW_RESOLUTION, SWEEP_ORDER,
};
pub use scgf::{cumulants, scgf, Scgf, CONVEXITY_TOL};
pub use tails::{
    chernoff_check, chernoff_holds, legendre, tail_probabilities, ChernoffCell, LegendrePoint, ObservableLaw, TailRow, CHERNOFF_TOL,
};
