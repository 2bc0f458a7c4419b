//! `mpa`: generate datasets, train classifiers, reproduce the benchmark
//! experiments and render plots.
//!
//! Exit codes: 0 on success, 1 when a reproduction misses its acceptance
//! thresholds, 2 on bad usage or input.

mod commands;
mod files;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mpa", version, about = "Moving-points classifiers and their evaluation harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Generator {
    Moons,
    Blobs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic two-class dataset as CSV (label in the last column).
    Generate {
        #[arg(value_enum)]
        generator: Generator,
        #[arg(long, default_value_t = movingpoints::experiments::DEFAULT_N_SAMPLES)]
        n_samples: usize,
        /// Gaussian noise added to moons coordinates.
        #[arg(long, default_value_t = movingpoints::experiments::DEFAULT_MOONS_NOISE)]
        noise: f64,
        /// Blob centers as inline JSON, e.g. '[[0,0],[5,5]]'.
        #[arg(long)]
        centers: Option<String>,
        /// Per-coordinate standard deviation of each blob.
        #[arg(long, default_value_t = movingpoints::experiments::DEFAULT_BLOBS_STD)]
        std: f64,
        #[arg(long, default_value_t = movingpoints::experiments::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit one classifier and write its model JSON and convergence CSV.
    Train {
        #[arg(long)]
        classifier: String,
        /// Dataset CSV with a header row.
        #[arg(long)]
        data: PathBuf,
        /// Zero-based label column; defaults to the last column.
        #[arg(long)]
        label_column: Option<usize>,
        /// Parameter overrides as inline JSON. A list value is grid-searched.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a benchmark experiment and check it against its thresholds.
    Reproduce {
        /// Preset id (moons5, moons25, blobs5) or an id from --config.
        id: Option<String>,
        /// JSON file holding one experiment config or a list of them.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        epochs: Option<usize>,
        /// Compare the reference classifier against this one only.
        #[arg(long)]
        classifier: Option<String>,
        /// Replacement search grid for --classifier, as inline JSON.
        #[arg(long, requires = "classifier")]
        grid: Option<String>,
        /// Output directory; defaults to the config's, else ./results.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a convergence or boundary CSV as SVG.
    Plot {
        /// `epoch,errors` convergence CSV or `x,y` boundary CSV.
        input: PathBuf,
        /// Dataset CSV to scatter under a boundary curve.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        title: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sequential backward feature selection on a CSV dataset.
    Sbs {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        label_column: Option<usize>,
        #[arg(long)]
        classifier: String,
        #[arg(long)]
        min_features: usize,
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = movingpoints::eval::DEFAULT_FOLDS)]
        folds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sbs.json")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { generator, n_samples, noise, centers, std, seed, out } => {
            commands::generate(generator, n_samples, noise, centers.as_deref(), std, seed, &out)
        }
        Command::Train { classifier, data, label_column, grid, epochs, seed, out } => {
            commands::train(&commands::TrainArgs { classifier, data, label_column, grid, epochs, seed, out })
        }
        Command::Reproduce { id, config, seed, runs, epochs, classifier, grid, out } => {
            commands::reproduce(&commands::ReproduceArgs { id, config, seed, runs, epochs, classifier, grid, out })
        }
        Command::Plot { input, data, title, out } => commands::plot(&input, data.as_deref(), title.as_deref(), &out),
        Command::Sbs { data, label_column, classifier, min_features, grid, folds, seed, out } => {
            commands::sbs(&commands::SbsArgs { data, label_column, classifier, min_features, grid, folds, seed, out })
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
