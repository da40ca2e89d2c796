//! `pulseq`: batch front end for pulse-level gate simulation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pulseq::par::{with_jobs, Parallelism};

use commands::Run;
use config::ExperimentConfig;
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "pulseq",
    version,
    about = "Pulse-level simulation and compilation of charge-qubit gates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Fixed integrator step, overriding the config and the default rule.
    #[arg(long, global = true)]
    dt: Option<f64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Integrate the gate (or explicit schedule) and write the trajectory.
    Simulate,
    /// Compile the gate into a pulse schedule and timing table.
    Compile,
    /// Sweep the ramp width and fit the error law.
    Sweep,
    /// Average-Hamiltonian terms of one segment or of the linear ramp.
    Magnus,
    /// Derived quantities and unit conversions.
    Report,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let cfg = ExperimentConfig::load(path)?;
    if let Some(dt) = cli.dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::Config(format!("--dt must be positive, got {dt}")));
        }
    }
    if cli.jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let mode = if cli.jobs == Some(1) {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    };
    let run = Run {
        out: commands::resolve_out(cli.out.as_deref(), &cfg),
        cfg,
        dt: cli.dt,
        mode,
    };
    log::info!("{:?} → {}", cli.command, run.out.display());
    with_jobs(cli.jobs, || match cli.command {
        Command::Simulate => commands::simulate(&run),
        Command::Compile => commands::compile(&run),
        Command::Sweep => commands::sweep(&run),
        Command::Magnus => commands::magnus(&run),
        Command::Report => commands::report(&run),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PULSEQ_SEED_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pulseq: {e}");
            e.exit_code()
        }
    }
}
