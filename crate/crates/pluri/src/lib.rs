//! Command-line front end for `pluri-core`: configuration, experiment
//! drivers, CSV/PGM/JSON output and the acceptance suite.
//!
//! Exit codes: 0 on success, 1 for configuration or domain errors (and for
//! failed acceptance criteria), 2 when an iteration fails to converge.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod acceptance;
mod commands;
pub mod config;
pub mod formats;

use config::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Numeric(#[from] pluri_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pluri_core::Error as E;
        match self {
            CliError::Numeric(E::SolverNonConvergence { .. } | E::CarlemanNonConvergence { .. } | E::Quadrature(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pluri", version, about = "Extremal functions, cross envelopes and separately holomorphic extension")]
struct Cli {
    /// Worker threads (all cores when omitted).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form ω(z, B, E) and its conjugate on a lattice in the disc.
    OmegaDisc(OmegaDiscArgs),
    /// Grid solve of the extremal function of a planar domain.
    OmegaGrid(OmegaGridArgs),
    /// One slice of the envelope {ω(z) + ω(w) < 1}.
    CrossEnvelope(CrossEnvelopeArgs),
    /// Gonchar-Carleman extension of a test function to (z, w).
    Extend(ExtendArgs),
    /// Extension from a Hartogs figure to the bidisc.
    Hartogs(HartogsArgs),
    /// Riemann map of a simply connected component: boundary correspondence.
    RiemannMap(RiemannMapArgs),
    /// Run acceptance criteria and print a pass/fail table.
    Verify(VerifyArgs),
    /// Run a subcommand described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn dispatch(cfg: RunConfig) -> Result<(), CliError> {
    match cfg {
        RunConfig::OmegaDisc(a) => commands::omega_disc(&a),
        RunConfig::OmegaGrid(a) => commands::omega_grid(&a),
        RunConfig::CrossEnvelope(a) => commands::cross_envelope(&a),
        RunConfig::Extend(a) => commands::extend(&a),
        RunConfig::Hartogs(a) => commands::hartogs(&a),
        RunConfig::RiemannMap(a) => commands::riemann_map(&a),
        RunConfig::Verify(a) => commands::verify(&a),
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = match cli.command {
        Command::OmegaDisc(a) => RunConfig::OmegaDisc(a),
        Command::OmegaGrid(a) => RunConfig::OmegaGrid(a),
        Command::CrossEnvelope(a) => RunConfig::CrossEnvelope(a),
        Command::Extend(a) => RunConfig::Extend(a),
        Command::Hartogs(a) => RunConfig::Hartogs(a),
        Command::RiemannMap(a) => RunConfig::RiemannMap(a),
        Command::Verify(a) => RunConfig::Verify(a),
        Command::Run { config } => RunConfig::load(&config)?,
    };
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Config("threads: must be positive".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    // An explicit count keeps the pool independent of the environment.
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    pool.install(|| dispatch(cfg))
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
