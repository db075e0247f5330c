mod commands;
mod dataset;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gcn-mwis", version, about = "GCN-weighted distributed MWIS scheduling: data, training, evaluation, simulation")]
struct Cli {
    /// Worker threads for instance-level parallelism (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, env = "GCN_MWIS_OUT", default_value = "gcn-mwis-out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Materialize a dataset description as graph files.
    Generate(commands::generate::Args),
    /// Train a GCN and write the model, history and per-epoch checkpoints.
    Train(commands::train::Args),
    /// Approximation ratios of greedy and GCN against the exact solver.
    Eval(commands::eval::Args),
    /// Throughput of greedy and GCN schedulers relative to per-slot exact scheduling.
    Simulate(commands::simulate::Args),
    /// Merge per-instance record files into summary and histogram tables.
    Report(commands::report::Args),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Generate(a) => commands::generate::run(a, &cli.out),
        Command::Train(a) => commands::train::run(a, &cli.out),
        Command::Eval(a) => commands::eval::run(a, &cli.out),
        Command::Simulate(a) => commands::simulate::run(a, &cli.out),
        Command::Report(a) => commands::report::run(a, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
