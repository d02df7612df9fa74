use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mfbose_lab::{cmd_bogoliubov, cmd_ed, cmd_export, cmd_ldp, cmd_sweep, cmd_verify, Context, Fault, LabError, OperatorKind, RunConfig};

/// Exact diagonalization, Bogoliubov theory and large-deviation checks for
/// the mean-field Bose gas on a truncated momentum lattice.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir` (default `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest dimension handled densely; overrides `solver.dense_limit`.
    #[arg(long, global = true)]
    dense_limit: Option<usize>,
    /// Eigenvector residual target; overrides `solver.tol`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<FaultArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorArg {
    Hamiltonian,
    Observable,
    G,
    Q,
    Remainder,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form Bogoliubov data: μ, E(p), f, depletion.
    Bogoliubov,
    /// Ground states of H_N for every N.
    Ed,
    /// Generating function, tails, rate function and bound margins.
    Ldp,
    /// Matrix identity checks; exits with 4 if any fails.
    Verify,
    /// N sweep with extrapolation and interpolation diagnostics.
    Sweep,
    /// Writes one operator as `row col re im` triplets.
    Export {
        #[arg(long, value_enum)]
        operator: OperatorArg,
        #[arg(long)]
        particles: usize,
    },
}

fn run(cli: Cli) -> Result<(), LabError> {
    let Some(path) = &cli.config else {
        return Err(LabError::Validation("--config is required".into()));
    };
    let src = std::fs::read_to_string(path).map_err(|e| LabError::Validation(format!("{}: {e}", path.display())))?;
    let mut cfg = RunConfig::parse(&src)?;
    if let Some(d) = cli.dense_limit {
        if d == 0 {
            return Err(LabError::Validation("--dense-limit must be positive".into()));
        }
        cfg.solver.dense_limit = d;
    }
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(LabError::Validation("--tol must be a positive number".into()));
        }
        cfg.solver.tol = t;
    }
    if let Some(k) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| LabError::Validation(format!("--threads: {e}")))?;
    }
    let out_dir = cli.out.clone().or(cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let mut ctx = Context::new(cfg);
    ctx.fault = cli.inject_fault.map(|FaultArg::Q| Fault::Q);

    let start = Instant::now();
    let (name, result) = match cli.command {
        Command::Bogoliubov => ("bogoliubov", cmd_bogoliubov(&ctx)),
        Command::Ed => ("ed", cmd_ed(&ctx)),
        Command::Ldp => ("ldp", cmd_ldp(&ctx)),
        Command::Verify => ("verify", cmd_verify(&ctx)),
        Command::Sweep => ("sweep", cmd_sweep(&ctx)),
        Command::Export { operator, particles } => {
            let kind = match operator {
                OperatorArg::Hamiltonian => OperatorKind::Hamiltonian,
                OperatorArg::Observable => OperatorKind::Observable,
                OperatorArg::G => OperatorKind::G,
                OperatorArg::Q => OperatorKind::Q,
                OperatorArg::Remainder => OperatorKind::Remainder,
            };
            ("export", cmd_export(&ctx, kind, particles))
        }
    };
    let run = result?;
    run.outputs.write(&out_dir, name, start.elapsed().as_secs_f64())?;
    for f in &run.outputs.files {
        println!("wrote {}", out_dir.join(&f.name).display());
    }
    if run.failures.is_empty() {
        Ok(())
    } else {
        Err(LabError::Identity(run.failures.join("; ")))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mfbose: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
