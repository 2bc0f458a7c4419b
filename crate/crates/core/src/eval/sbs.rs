use serde::{Deserialize, Serialize};

use crate::classifier::{Estimator, Params};
use crate::data::{stratified_kfold, FoldAssignment, LabeledDataset};
use crate::error::{Error, Result};

use super::cv::cross_val_score;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbsStep {
    pub removed: usize,
    /// Remaining original feature indices, ascending.
    pub subset: Vec<usize>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbsResult {
    pub best_subset: Vec<usize>,
    pub best_score: f64,
    /// Mean CV accuracy with every feature present.
    pub full_score: f64,
    pub trajectory: Vec<SbsStep>,
}

fn subset_score<E: Estimator>(
    estimator: &E,
    params: &Params,
    data: &LabeledDataset,
    subset: &[usize],
    folds: &FoldAssignment,
    seed: u64,
) -> Result<f64> {
    let scores = cross_val_score(estimator, params, &data.select_features(subset), folds, seed)?;
    Ok(scores.iter().sum::<f64>() / scores.len() as f64)
}

/// Greedy backward elimination by mean stratified k-fold accuracy.
///
/// Each round drops the feature whose removal scores best, the lowest index
/// on ties, until `min_features` remain. The best subset over the whole
/// path is returned; equal scores favour the smaller subset.
pub fn sequential_backward_selection<E: Estimator>(
    estimator: &E,
    params: &Params,
    data: &LabeledDataset,
    min_features: usize,
    k: usize,
    seed: u64,
) -> Result<SbsResult> {
    let d = data.n_features();
    if min_features == 0 || d <= min_features {
        return Err(Error::invalid_arg(format!(
            "need 1 <= min_features < n_features, got min_features={min_features}, n_features={d}"
        )));
    }
    let folds = stratified_kfold(data, k, seed)?;
    let mut current: Vec<usize> = (0..d).collect();
    let full_score = subset_score(estimator, params, data, &current, &folds, seed)?;
    let (mut best_subset, mut best_score) = (current.clone(), full_score);
    let mut trajectory = Vec::new();
    while current.len() > min_features {
        let mut round: Option<(f64, usize)> = None;
        for pos in 0..current.len() {
            let mut candidate = current.clone();
            candidate.remove(pos);
            let score = subset_score(estimator, params, data, &candidate, &folds, seed)?;
            if round.is_none_or(|(s, _)| score > s) {
                round = Some((score, pos));
            }
        }
        let (score, pos) = round.expect("at least one candidate");
        let removed = current.remove(pos);
        if score >= best_score {
            best_subset = current.clone();
            best_score = score;
        }
        trajectory.push(SbsStep { removed, subset: current.clone(), score });
    }
    Ok(SbsResult { best_subset, best_score, full_score, trajectory })
}
