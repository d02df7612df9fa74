//! Configuration, reports and file formats around `mfbose-core`, plus the
//! subcommands of the `mfbose` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{cmd_bogoliubov, cmd_ed, cmd_export, cmd_ldp, cmd_sweep, cmd_verify, Context, Fault, OperatorKind, Run};
pub use config::{ConfigError, RunConfig};
pub use error::LabError;
pub use output::Outputs;
