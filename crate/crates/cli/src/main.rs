//! `rotomo`: simulate, reconstruct and inspect rotational state tomography.
//!
//! Exit codes: 0 success, 1 round-trip error above threshold, 2 usage,
//! configuration or file error, 3 sampling violation.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "rotomo", version, about = "Rotational density-matrix tomography workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forward-simulate Pr(x,t) for a density block and write it as CSV.
    Simulate(SimulateArgs),
    /// Invert a measurement file into a density block and a report.
    Reconstruct(ReconstructArgs),
    /// Print rows of the product-decomposition coefficient table.
    Coeffs(CoeffsArgs),
    /// Generate a test state, simulate, reconstruct and compare.
    Roundtrip(RoundtripArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Density block (JSON).
    #[arg(long)]
    state: Option<PathBuf>,
    /// Measurement CSV to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shot-noise seed; overrides noise.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the alignment trace <cos^2>(t) as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    config: PathBuf,
    /// Measurement CSV.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Density block (JSON) to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Known block to compare against.
    #[arg(long)]
    state: Option<PathBuf>,
    /// With --state: exit 1 when the max element error reaches this value.
    #[arg(long)]
    threshold: Option<f64>,
    /// Deepest J searched for degenerate partners; overrides sampling.j_search_cap.
    #[arg(long)]
    search_cap: Option<u32>,
    /// Project the result onto positive semidefinite blocks.
    #[arg(long)]
    psd: bool,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    k: i32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    m: i32,
    /// Range of J = J1 + J2 as `lo:hi`, or a single value.
    #[arg(long, default_value = "0:4")]
    j_range: String,
    /// Keep only rows with this ΔJ = J1 - J2.
    #[arg(long, allow_hyphen_values = true)]
    delta_j: Option<i32>,
    /// Keep only rows with this Legendre order.
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    #[arg(long)]
    config: PathBuf,
    /// Metrics file (JSON) to write.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Test-state seed; overrides state.seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides roundtrip.threshold.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(String),
    Io(String),
    Core(rotomo_core::Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// Core errors with the file they came from, if any.
    pub fn core_at(path: &Path) -> impl FnOnce(rotomo_core::Error) -> Self + '_ {
        move |e| match e {
            rotomo_core::Error::Sampling(_) => CliError::Core(e),
            other => CliError::Io(format!("{}: {other}", path.display())),
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Core(rotomo_core::Error::Sampling(_)) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Core(rotomo_core::Error::Sampling(m)) => write!(f, "sampling violation: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<rotomo_core::Error> for CliError {
    fn from(e: rotomo_core::Error) -> Self {
        CliError::Core(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Coeffs(a) => commands::coeffs(a),
        Command::Roundtrip(a) => commands::roundtrip(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
