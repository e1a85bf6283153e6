//! `hypernull`: null models, ensembles and validated projections for
//! hypergraph incidence data.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hypernull",
    version,
    about = "Null models, ensemble sampling and validated projections for hypergraph incidence data",
    after_help = "Progress goes to standard error; data goes to standard output unless --out is given."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a null model to an incidence matrix and write the solution as JSON
    Solve(commands::SolveArgs),
    /// Draw canonical samples from a fitted model into a sample container
    Sample(commands::SampleArgs),
    /// Shuffle the observed matrix into a sample container
    Shuffle(commands::ShuffleArgs),
    /// Analytic regime curves with Monte Carlo checks over a density grid, as CSV
    Sweep(commands::SweepArgs),
    /// Projection metrics, model expectations and R-squared for one dataset
    Analyze(commands::AnalyzeArgs),
    /// Statistically validated projection and its communities
    Validate(commands::ValidateArgs),
    /// Regime threshold table for given dimensions, as JSON
    Thresholds(commands::ThresholdsArgs),
    /// Verify that a file produced or consumed by this tool parses
    Check(commands::CheckArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve(args),
        Command::Sample(args) => commands::sample(args),
        Command::Shuffle(args) => commands::shuffle(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Analyze(args) => commands::analyze(args),
        Command::Validate(args) => commands::validate(args),
        Command::Thresholds(args) => commands::thresholds(args),
        Command::Check(args) => commands::check(args),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            eprintln!("hypernull: error: {error:#}");
            ExitCode::FAILURE
        }
    }
}
