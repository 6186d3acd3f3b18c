use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};

use alp_cli::{config, dispatch};

/// Anisotropic Littlewood-Paley analysis and rotating-flow solver driver.
///
/// Exit status: 0 pass, 1 assertion failure, 2 configuration error.
#[derive(Parser)]
#[command(name = "alp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Dyadic (Littlewood-Paley) block tables and reconstruction checks
    Decompose(Common),
    /// Norm tables for a seeded random-field ensemble
    Norms(Common),
    /// Empirical certification of the functional-inequality bank
    Verify(Common),
    /// Time integration with per-step diagnostics and ALP1 snapshots
    Solve(Common),
    /// Scripted qualitative-behavior studies with pass/fail verdicts
    Experiment(Common),
}

#[derive(Args)]
struct Common {
    /// Path to a line-based key=value configuration file
    #[arg(long)]
    config: PathBuf,
    /// Seed for every randomized input (ensembles, random initial data)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output root; each run creates run-<timestamp>-seed<seed> beneath it
    #[arg(long, default_value = "runs")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common) = match &cli.command {
        Command::Decompose(c) => (dispatch::Subcommand::Decompose, c),
        Command::Norms(c) => (dispatch::Subcommand::Norms, c),
        Command::Verify(c) => (dispatch::Subcommand::Verify, c),
        Command::Solve(c) => (dispatch::Subcommand::Solve, c),
        Command::Experiment(c) => (dispatch::Subcommand::Experiment, c),
    };

    let cfg = match config::parse_config(&common.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };

    match dispatch::dispatch(sub, &cfg, common.seed, &common.out) {
        Ok(result) => {
            println!("run directory: {}", result.dir.display());
            for f in &result.failures {
                println!("FAIL {f}");
            }
            if result.passed() {
                println!("PASS {sub}");
                ExitCode::SUCCESS
            } else {
                println!("FAIL {sub}");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
