//! `casimir`: force and free energy of a sphere in a spherical dip.
//!
//! Exit codes: 0 success, 1 configuration or domain error, 2 convergence
//! failure (including a failed selfcheck).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod settings;

use std::process::ExitCode;

use casimir_core::CasimirError;
use clap::{Parser, Subcommand};

use settings::{Settings, SweepArgs};

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Casimir force on a sphere suspended in a spherical dip"
)]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zero-temperature force from the mode sum or the narrow-gap formula.
    Force,
    /// Finite-temperature free energy and its limits.
    Thermal,
    /// One-axis parameter sweep as CSV or JSON.
    Sweep(SweepArgs),
    /// First-order correction factors at one d/a.
    Factors,
    /// Run the built-in invariant suites.
    Selfcheck(commands::SelfcheckArgs),
}

/// A user-facing failure and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn convergence(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<CasimirError> for Failure {
    fn from(e: CasimirError) -> Self {
        match e {
            CasimirError::Convergence { .. } => Failure::convergence(e.to_string()),
            _ => Failure::config(e.to_string()),
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CASIMIR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::config(format!(
            "CASIMIR_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::config(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    let (file, file_sweep) = match &cli.settings.config {
        Some(path) => settings::load_config(path)?,
        None => (Settings::default(), SweepArgs::default()),
    };
    let s = cli.settings.or(file);
    match cli.command {
        Command::Force => commands::force(&s),
        Command::Thermal => commands::thermal(&s),
        Command::Sweep(args) => commands::sweep(&s, &args.or(file_sweep)),
        Command::Factors => commands::factors(&s),
        Command::Selfcheck(args) => commands::selfcheck(&s, &args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
