//! `blocknorm` command-line interface.
//!
//! Exit codes: 0 on success, 2 when `verify` finds a sound violation, 1 on
//! usage, input or I/O errors.

mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};

pub use config::{RunConfig, CONFIG_SCHEMA};
pub use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "BLOCKNORM_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "blocknorm",
    version,
    about = "Numerical ranges and positive block matrix inequalities"
)]
struct Cli {
    /// JSON config file (schema "runconfig/1").
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Support function, width, inradius and distance to scalars of W(X).
    Range(RangeArgs),
    /// Elliptical width estimate with its certificates and upper bound.
    Width2(Width2Args),
    /// Build a positive block matrix.
    Make(MakeArgs),
    /// Check inequalities on random instances or on one block matrix.
    Verify(VerifyArgs),
    /// Extremal searches: q26, conj33, q38.
    Search(SearchArgs),
    /// Summarize a JSON output file.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct RangeArgs {
    /// Matrix JSON.
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of support angles (default from config, 720).
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Width2Args {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = blocknorm::ellwidth::DEFAULT_RESTARTS)]
    restarts: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MakeArgs {
    /// general, normal, essentially_hermitian, unitary, intro or modulus.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Spectral radius for `normal`.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Disc center `re,im` for `normal`.
    #[arg(long, default_value = "0,0")]
    center: String,
    /// Parameters of `intro`.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// Matrix JSON for `modulus`.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Statement ids, comma separated (THM11, REV_BL2, THM21, COR22, ...).
    #[arg(long, value_delimiter = ',')]
    statement: Vec<String>,
    /// Dimensions for batch mode.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Schatten exponents, `inf` for the operator norm.
    #[arg(long, value_delimiter = ',')]
    p_grid: Vec<String>,
    /// Restarts of the elliptical width estimate.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Check one block matrix instead of random batches.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// `.json` or `.csv`; may be repeated.
    #[arg(long)]
    out: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// q26, conj33 or q38.
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 0)]
    j: usize,
    #[arg(long, value_delimiter = ',')]
    p_grid: Vec<String>,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    /// Instances for q38.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Off-diagonal block for conj33 (default: Haar unitary from the seed).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Checkpoint file (default: next to `--out`).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// History CSV.
    #[arg(long)]
    history: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Optional CSV export.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs one command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Some(t),
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got {v:?}");
                return EXIT_ERROR;
            }
        },
        Err(_) => None,
    };
    let go = || match commands::dispatch(cli, argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            EXIT_ERROR
        }
    };
    match threads {
        Some(t) => blocknorm::parallel::with_thread_cap(t, go),
        None => go(),
    }
}
