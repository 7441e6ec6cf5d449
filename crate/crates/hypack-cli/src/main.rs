//! `hypack` — bound tables over (m, R) grids, packing simulations, and the
//! verification suites, with CSV/JSON output.
//!
//! Exit codes: 0 success, 1 scientific-check failure, 2 usage/config error,
//! 3 resource refusal.

mod commands;
mod grid;
mod manifest;
mod verify;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Failure modes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: a scientific check failed (verify suite, packing re-check).
    Science(String),
    /// Exit 2: bad flags, unparsable grids, invalid configuration, IO.
    Usage(String),
    /// Exit 3: resource refusal (point-count guard, linear overflow).
    Resource(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Science(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Science(m) | CliError::Usage(m) | CliError::Resource(m) => m,
        }
    }
}

impl From<hypack::Error> for CliError {
    fn from(e: hypack::Error) -> Self {
        match e {
            hypack::Error::Resource(_) => CliError::Resource(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "hypack", version, about = "Hyperbolic sphere-packing bounds toolkit")]
struct Cli {
    /// Worker threads for grid evaluation and verification batteries
    /// (default: all cores). Output order never depends on this.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the trivial and improved lower bounds over an (m, R) grid.
    Bounds(BoundsArgs),
    /// Run the Poisson -> prune -> independent-set packing pipeline once.
    Simulate(SimulateArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Evaluate the spherical-code upper bound from a user-supplied table.
    CohnZhao(CohnZhaoArgs),
}

#[derive(Args)]
pub struct BoundsArgs {
    /// Dimension grid: comma list (`2,100,10000`) or geometric range
    /// `start:stop:count`.
    #[arg(long = "m")]
    m: String,
    /// Radius grid, same syntax.
    #[arg(long = "R")]
    r: String,
    /// Slack parameter of the improved bound, in (0, 1).
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Output path (stdout when absent). A manifest is written beside CSV
    /// files and embedded in JSON ones.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit linear-scale values; refuses (exit 3) if any would overflow.
    #[arg(long)]
    linear: bool,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[arg(long = "m")]
    m: u32,
    #[arg(long = "R")]
    r: f64,
    /// Region radius; must exceed 4R.
    #[arg(long = "L")]
    l: f64,
    /// Explicit Poisson intensity (points per unit volume).
    #[arg(long, conflicts_with = "target_degree")]
    lambda: Option<f64>,
    /// Target expected 2R-ball count; sets intensity to D / vol(B_2R).
    #[arg(long)]
    target_degree: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples for the core density estimate.
    #[arg(long, default_value_t = 10_000)]
    mc_samples: u32,
    /// Degree prune threshold (default: D + D^(2/3)).
    #[arg(long)]
    degree_cap: Option<f64>,
    /// Codegree prune threshold (default: D (ln D)^-10, which is below 1 at
    /// desk scale and prunes every non-isolated point; set explicitly for
    /// non-degenerate runs).
    #[arg(long)]
    codegree_cap: Option<f64>,
    /// Result JSON path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also export the sampled points as CSV to this path.
    #[arg(long)]
    points: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Which battery to run.
    #[arg(value_parser = ["geometry", "volumes", "claims", "poisson"])]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CohnZhaoArgs {
    #[arg(long = "m")]
    m: u32,
    /// CSV table with header `theta,log_A`.
    #[arg(long)]
    codes: PathBuf,
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if n == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        // Ignore the error if a pool already exists (repeat initialization).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = match cli.command {
        Command::Bounds(args) => commands::bounds::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Verify(args) => commands::verify_cmd::run(&args),
        Command::CohnZhao(args) => commands::cohn_zhao::run(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
