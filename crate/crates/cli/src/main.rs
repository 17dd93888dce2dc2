//! `emwave`: reproducible file-based front end for the symbol engine, the
//! variety search, the weak-field simulator and the causal-geometry tools.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "emwave",
    version,
    about = "Interaction symbols, weak-field simulation and causal geometry"
)]
pub struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON configuration for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Suppress progress and summaries on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute every tabulated appendix value exactly and compare.
    VerifyAppendix {
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Interaction symbol of the configuration given by `--config`.
    Symbol,
    /// Search the light-cone variety for a nondegenerate configuration.
    Search(SearchArgs),
    /// Weak-field generation of `g₁` by a conormal electromagnetic source.
    Simulate(SimulateArgs),
    /// Light observation set of a source point.
    Observe,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Candidate budget; overrides the config.
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Grid points per axis; replaces the grid and source of the config with
    /// the standard setup at this size.
    #[arg(long)]
    pub points: Option<usize>,
    /// Courant number `dt/h` for `--points`.
    #[arg(long, default_value_t = 0.2)]
    pub cfl: f64,
    /// JSON source specification overriding the config's source.
    #[arg(long)]
    pub source: Option<PathBuf>,
    /// Skip the second run used for the quadratic-response ratio.
    #[arg(long)]
    pub no_response: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
