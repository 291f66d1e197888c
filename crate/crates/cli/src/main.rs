//! `resistive-walks`: effective resistances, closed forms, random-walk
//! simulation and cross-validation from the command line.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use resistive_walks::walk::DEFAULT_MAX_STEPS;
use serde::Serialize;

use commands::{CliError, Outcome};
use input::TreeArg;
use report::{Format, RunReport, Status};

#[derive(Debug, Parser)]
#[command(name = "resistive-walks", version, about = "Random walks on electric networks")]
struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Effective conductance, resistance and escape probability.
    Resist(ResistArgs),
    /// Closed-form voltage, current, Green function, hitting probability and
    /// transition counts on the homogeneous tree, by depth.
    Oracle(OracleArgs),
    /// Monte Carlo estimates, next to solver values and closed forms.
    Simulate(SimulateArgs),
    /// Closed form vs solver vs Monte Carlo on homogeneous trees.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("net").required(true).args(["network", "tree"])))]
#[command(group(ArgGroup::new("mode").required(true).args(["source", "to_infinity"])))]
pub struct ResistArgs {
    /// Network JSON file.
    #[arg(long)]
    network: Option<PathBuf>,
    /// Homogeneous tree `q,n`: levels 0..=n.
    #[arg(long)]
    tree: Option<TreeArg>,
    #[arg(long, requires = "target_set")]
    source: Option<String>,
    /// `level:k`, `z`, or ids separated by commas.
    #[arg(long, requires = "source")]
    target_set: Option<String>,
    /// Limit over exhaustions of the infinite tree (needs --tree).
    #[arg(long, conflicts_with_all = ["source", "target_set", "network"])]
    to_infinity: bool,
    /// Solver tolerance, or the stopping tolerance of the limit.
    #[arg(long)]
    tol: Option<f64>,
    /// Level budget for --to-infinity.
    #[arg(long, default_value_t = 64)]
    max_levels: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    q: usize,
    #[arg(long, default_value_t = 3)]
    max_depth: usize,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("net").required(true).args(["network", "tree"])))]
pub struct SimulateArgs {
    #[arg(long)]
    network: Option<PathBuf>,
    /// Tree `q[,L]` with levels >= L merged into an absorbing vertex `z`.
    #[arg(long)]
    tree: Option<TreeArg>,
    /// Start vertex (default 0).
    #[arg(long)]
    start: Option<String>,
    /// Absorbing set; defaults to `z` on trees.
    #[arg(long)]
    absorb: Option<String>,
    /// Estimate the probability of hitting this vertex before absorption.
    #[arg(long)]
    hit: Vec<String>,
    /// Estimate the mean number of visits to this vertex.
    #[arg(long)]
    green: Vec<String>,
    /// Estimate the mean number of steps `x -> y`, given as `x,y`.
    #[arg(long)]
    transition: Vec<String>,
    /// Estimate the probability of absorption before returning to the start.
    #[arg(long)]
    escape: bool,
    #[arg(long, default_value_t = 100_000)]
    walks: u64,
    #[arg(long, env = "RESISTIVE_WALKS_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value_t = 8)]
    levels: usize,
    #[arg(long, default_value_t = 100_000)]
    walks: u64,
    #[arg(long, env = "RESISTIVE_WALKS_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Shell depth of the Monte Carlo tree.
    #[arg(long)]
    shell_depth: Option<usize>,
}

fn emit<R: Serialize>(command: &str, report: Outcome<RunReport<R>>, format: Format) -> ExitCode {
    match report {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = report.write(format, &mut out).and_then(|_| Ok(out.flush()?)) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(report.exit_status.exit_code())
        }
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(e)) => {
            eprintln!("error: {e:#}");
            let mut failed: RunReport<report::Row> = RunReport::new(command);
            failed.exit_status = Status::Error;
            failed.meta("error", format!("{e:#}"));
            let _ = failed.write(format, &mut std::io::stdout().lock());
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Resist(args) => emit("resist", commands::resist(args), cli.format),
        Command::Oracle(args) => emit("oracle", commands::oracle(args), cli.format),
        Command::Simulate(args) => emit("simulate", commands::simulate(args), cli.format),
        Command::Verify(args) => emit("verify", commands::verify(args), cli.format),
    }
}
