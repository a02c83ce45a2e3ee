use autoreg_cli::error::CliError;
use autoreg_cli::{experiment, fit, plot};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Regularized FIR identification with data-driven regularization.
#[derive(Parser)]
#[command(name = "autoreg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a filter from recorded input/output samples.
    Fit {
        /// Input signal (.csv or .f64).
        #[arg(long)]
        x: PathBuf,
        /// Desired signal (.csv or .f64), same length as the input.
        #[arg(long)]
        d: PathBuf,
        /// Filter length in taps.
        #[arg(long = "L")]
        l: usize,
        /// Starting regularization.
        #[arg(long, default_value_t = 0.5)]
        alpha0: f64,
        /// Regularization update iterations.
        #[arg(long, default_value_t = 5)]
        iters: usize,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a synthetic identification sweep from a config file.
    Experiment {
        /// JSON sweep description.
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads for the sweep (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Render a chart from a results or trace table.
    Plot {
        /// Table produced by `fit` or `experiment`.
        #[arg(long)]
        csv: PathBuf,
        /// One of: misalignment-vs-N, alpha-vs-N, alpha-trace.
        #[arg(long)]
        kind: String,
        /// Destination SVG file.
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit {
            x,
            d,
            l,
            alpha0,
            iters,
            out,
        } => fit::run(&fit::FitArgs {
            x,
            d,
            l,
            alpha0,
            iters,
            out,
        }),
        Command::Experiment {
            config,
            out,
            threads,
        } => experiment::run(&experiment::ExperimentArgs {
            config,
            out,
            threads,
        }),
        Command::Plot { csv, kind, out } => plot::run(&plot::PlotArgs { csv, kind, out }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
