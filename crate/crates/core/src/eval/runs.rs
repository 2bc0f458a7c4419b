use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{Classifier, Estimator, Params};
use crate::data::{train_test_split, LabeledDataset, SplitSpec};
use crate::error::{Error, Result};

use super::cv::{grid_search, Grid};
use super::metrics::accuracy;
use super::stats::RunStats;

/// Where each run's split seed comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitSeeding {
    /// Run `i` splits with `seed0 + i`.
    PerRun,
    /// Every run uses the same split.
    Fixed(u64),
}

/// Dataset source for each run, given the run seed.
pub type DatasetSource<'a> = &'a (dyn Fn(u64) -> Result<LabeledDataset> + Sync);

pub struct RunsProtocol<'a> {
    pub dataset: DatasetSource<'a>,
    pub n_runs: usize,
    pub seed0: u64,
    pub test_fraction: f64,
    pub folds: usize,
    pub split_seeding: SplitSeeding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub test_accuracy: f64,
    pub best_config: Params,
    pub best_cv_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunsOutcome {
    pub records: Vec<RunRecord>,
    pub stats: RunStats,
}

fn single_run<E: Estimator>(estimator: &E, grid: &Grid, protocol: &RunsProtocol<'_>, run: usize) -> Result<RunRecord> {
    let seed = protocol.seed0.wrapping_add(run as u64);
    let data = (protocol.dataset)(seed)?;
    let split_seed = match protocol.split_seeding {
        SplitSeeding::PerRun => seed,
        SplitSeeding::Fixed(s) => s,
    };
    let (train, test) = train_test_split(&data, &SplitSpec::new(protocol.test_fraction, split_seed, true)?)?;
    let search = grid_search(estimator, grid, &train, protocol.folds, seed)?;
    let model = estimator.fit(&train, &search.best_config, seed)?;
    let test_accuracy = accuracy(test.labels(), &model.predict(test.features())?)?;
    Ok(RunRecord { run, seed, test_accuracy, best_config: search.best_config, best_cv_score: search.best_cv_score })
}

/// Stability protocol: per run a fresh stratified split, a grid search on
/// the training part, a refit of the winner and its test accuracy.
pub fn repeated_runs<E: Estimator>(estimator: &E, grid: &Grid, protocol: &RunsProtocol<'_>) -> Result<RunsOutcome> {
    if protocol.n_runs < 2 {
        return Err(Error::invalid_arg(format!("need at least 2 runs, got {}", protocol.n_runs)));
    }
    let records = (0..protocol.n_runs)
        .into_par_iter()
        .map(|run| single_run(estimator, grid, protocol, run).map_err(|e| e.in_run(run)))
        .collect::<Result<Vec<_>>>()?;
    let scores: Vec<f64> = records.iter().map(|r| r.test_accuracy).collect();
    Ok(RunsOutcome { stats: RunStats::from_scores(&scores)?, records })
}
