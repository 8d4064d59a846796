mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Event-camera optical flow by space-time triplet matching.
#[derive(Parser, Debug)]
#[command(name = "tripflow", version)]
struct Cli {
    /// `key = value` config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-event flow plus voxelized, filtered `.flo` slices.
    Estimate(commands::EstimateArgs),
    /// AEE / outlier report of a predicted `.flo` against ground truth.
    Evaluate(commands::EvaluateArgs),
    /// Render a synthetic scene to events and ground-truth flow.
    Simulate(commands::SimulateArgs),
    /// Single-threaded incremental throughput.
    Bench(commands::BenchArgs),
    /// Color-wheel PNG of a `.flo` file.
    Viz(commands::VizArgs),
    /// Direction/magnitude histogram of triplet velocities as CSV.
    Histogram(commands::HistogramArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result =
        config::ConfigFile::load(cli.config.as_deref()).and_then(|file| match &cli.command {
            Command::Estimate(a) => commands::estimate(&file, a),
            Command::Evaluate(a) => commands::evaluate(&file, a),
            Command::Simulate(a) => commands::simulate(a),
            Command::Bench(a) => commands::bench(&file, a),
            Command::Viz(a) => commands::viz(a),
            Command::Histogram(a) => commands::histogram(&file, a),
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
