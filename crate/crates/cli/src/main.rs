//! `glsnormal`: generate, count and check Champernowne-style normal numbers
//! for generalized Lüroth series.

mod checks;
mod commands;
mod output;
mod system;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gls_normal::asymptotics::DEFAULT_SEED;

pub type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

/// What a successful run concluded.
pub enum Status {
    Ok,
    /// at least one invariant failed
    Failed,
}

#[derive(Parser)]
#[command(name = "glsnormal", version, about = "Normal numbers for generalized Lüroth series")]
struct Cli {
    /// Seed for randomized checks; recorded in every report.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first N digits of the expansion.
    Gen(commands::gen::Args),
    /// Block frequencies and hot-spot ratios of a prefix.
    Stats(commands::stats::Args),
    /// Lattice sums S(ε), S#(ε) and string counts.
    Sums(commands::sums::Args),
    /// Laplace-method analysis at one ε, with optional checks.
    Laplace(commands::laplace::Args),
    /// Run the full invariant battery for a system.
    Verify(commands::verify::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => commands::gen::run(a, cli.seed),
        Command::Stats(a) => commands::stats::run(a, cli.seed),
        Command::Sums(a) => commands::sums::run(a, cli.seed),
        Command::Laplace(a) => commands::laplace::run(a, cli.seed),
        Command::Verify(a) => commands::verify::run(a, cli.seed),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
