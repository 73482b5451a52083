//! Benchmark harness for the `minrf` solvers.
//!
//! Subcommands: `solve` (one instance, one algorithm, JSON report),
//! `sweep` (full experiment grid to CSV), `verify` (brute-force
//! robustness check of a solution file), `demo-adversarial` (probe-
//! detection frequency on the query-hiding oracle), and `gen-tight`
//! (emit the nested worst-case instance as JSON).
//!
//! Exit codes: 0 success, 2 input/config error, 3 infeasible, 4
//! numerical stall.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod config;
pub mod experiment;
pub mod instances;
pub mod movielens;
pub mod snap;

mod commands;

/// A terminal-bound error: message plus process exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    /// Input/config error (exit code 2).
    pub fn input(message: impl Into<String>) -> Self {
        CliError { message: message.into(), code: 2 }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<minrf::Error> for CliError {
    fn from(e: minrf::Error) -> Self {
        let code = match e {
            minrf::Error::NumericalStall { .. } => 4,
            _ => 2,
        };
        CliError { message: e.to_string(), code }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::input(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "minrf", version, about = "Robust multi-submodular cover benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one algorithm and print a JSON report.
    ///
    /// Reproduces the sweep cell at the same budget, repetition 0.
    Solve {
        /// Experiment config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Algorithm to run; defaults to the config's first entry.
        #[arg(long)]
        algorithm: Option<String>,
        /// Deletion budget the solution must survive.
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Override the config's satisfaction slack.
        #[arg(long)]
        alpha: Option<f64>,
        /// Override the config's master seed.
        #[arg(long)]
        master_seed: Option<u64>,
    },
    /// Run the configured sweep grid and emit aggregated CSV.
    Sweep {
        /// Experiment config (JSON) with a `sweep` section.
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; overrides the config's `output` (stdout
        /// when neither is set).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's master seed.
        #[arg(long)]
        master_seed: Option<u64>,
        /// Override the config's repetition count.
        #[arg(long)]
        repetitions: Option<usize>,
        /// Also write per-algorithm series files into this directory.
        #[arg(long)]
        plot_dir: Option<PathBuf>,
    },
    /// Brute-force check that a solution file is (r, alpha)-robust.
    Verify {
        /// Experiment config (JSON) describing the instance.
        #[arg(long)]
        config: PathBuf,
        /// Solution file: a JSON id array or {"solution": [...]}.
        #[arg(long)]
        solution: PathBuf,
        /// Deletion budget to check against.
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Override the config's satisfaction slack.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Measure how often random removal probes expose the hidden
    /// fragile set of the query-hiding oracle.
    DemoAdversarial {
        /// Ground-set size.
        #[arg(long, default_value_t = 30)]
        nodes: usize,
        /// Hidden removal-set size.
        #[arg(long, default_value_t = 5)]
        removals: usize,
        /// Random probes per seed.
        #[arg(long, default_value_t = 1000)]
        probes: usize,
        /// Number of independently seeded oracles.
        #[arg(long, default_value_t = 200)]
        seeds: u64,
        /// First seed; seed i is seed_base + i.
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
    },
    /// Emit the nested worst-case set-cover instance as JSON.
    GenTight {
        /// Universe size exponent: 2^k points.
        #[arg(long)]
        k: u32,
        /// Destination file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses arguments, dispatches, and maps every outcome to an exit
/// code. The binary's `main` is just `process::exit(run())`.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.code
        }
    }
}
