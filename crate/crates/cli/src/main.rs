//! Batch front end: reads polynomials and spectra from JSON, runs the
//! library operations, and writes CSV/JSON/SVG artifacts. Identical
//! configuration yields byte-identical outputs; every artifact embeds a
//! hash of the resolved configuration.

mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use amoeba_core::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files, invalid inputs: exit code 2.
    Input(String),
    /// Numerical failures: exit code 3.
    Numerical(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidArgument(_)
            | CoreError::InvalidSpectrum(_)
            | CoreError::Truncation(_)
            | CoreError::ZeroCoordinate { .. }
            | CoreError::Inadmissible
            | CoreError::EmptyEnsemble => CliError::Input(e.to_string()),
            CoreError::NoConvergence { .. }
            | CoreError::NearAmoeba(_)
            | CoreError::DegenerateFiber { .. }
            | CoreError::DegenerateCriticalPoint(_)
            | CoreError::BoundaryDivergence { .. }
            | CoreError::SingularPoint => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "amoeba",
    about = "Amoebas of complex hypersurfaces and ensemble thermodynamics",
    version
)]
struct Cli {
    /// Worker threads for the sampling loops (default: all cores). Output
    /// is deterministic regardless.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: commands::Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
