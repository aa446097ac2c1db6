//! Command-line driver: single runs, parameter sweeps, sweep analysis and
//! SVG plots, configured by one JSON document.

// NaN must fail validation, so `!(x > 0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod tables;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::JobConfig;
use error::{CliResult, Failure};

#[derive(Debug, Parser)]
#[command(
    name = "catscale",
    version,
    about = "Quantum-classical correspondence runs for noisy cat maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON job configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Sweep worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Reserved; every channel is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Paired classical/quantum evolution at one (N, D).
    Run,
    /// Grid of runs written to sweep.csv.
    Sweep,
    /// Exponent search and fits on a sweep table.
    Analyze {
        /// Sweep table; defaults to the config's input, then <out>/sweep.csv.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// SVG scatter of a sweep table or trace.
    Plot {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let config = JobConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        log::debug!("seed {seed} ignored: the pipeline is deterministic");
    }
    let workers = match cli.workers {
        Some(0) => return Err(Failure::config("--workers must be at least 1")),
        Some(w) => w,
        None => default_workers(),
    };
    match &cli.command {
        Command::Run => {
            let s = commands::cmd_run(&config, &cli.out)?;
            log::info!("K1m = {:e}, DChi2m = {:e}", s.k1m, s.d_chi2m);
        }
        Command::Sweep => {
            let t = commands::cmd_sweep(&config, &cli.out, workers)?;
            log::info!("wrote {} rows", t.len());
        }
        Command::Analyze { input } => {
            let a = commands::cmd_analyze(&config, input.as_deref(), &cli.out)?;
            log::info!("gamma = {:.4}, ln zeta* = {:.4}", a.gamma, a.ln_zeta_star);
        }
        Command::Plot { input } => {
            let p = commands::cmd_plot(&config, input.as_deref(), &cli.out)?;
            log::info!("wrote {}", p.display());
        }
    }
    Ok(())
}
