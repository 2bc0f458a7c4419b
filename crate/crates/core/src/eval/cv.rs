use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classifier::{Classifier, Estimator, Params};
use crate::data::{stratified_kfold, FoldAssignment, LabeledDataset};
use crate::error::{Error, Result};

use super::metrics::accuracy;

pub const DEFAULT_FOLDS: usize = 3;

/// Candidate values per hyperparameter name.
pub type Grid = BTreeMap<String, Vec<Value>>;

/// Test accuracy on each fold after fitting on its complement, in fold order.
pub fn cross_val_score<E: Estimator>(
    estimator: &E,
    params: &Params,
    data: &LabeledDataset,
    folds: &FoldAssignment,
    seed: u64,
) -> Result<Vec<f64>> {
    if folds.fold_index.len() != data.n_samples() {
        return Err(Error::invalid_arg(format!(
            "fold assignment covers {} samples, dataset has {}",
            folds.fold_index.len(),
            data.n_samples()
        )));
    }
    (0..folds.k)
        .map(|fold| {
            let score = || -> Result<f64> {
                let test = folds.test_indices(fold);
                if test.is_empty() {
                    return Err(Error::invalid_arg("empty fold"));
                }
                let model = estimator.fit(&data.subset(&folds.train_indices(fold)), params, seed)?;
                let test = data.subset(&test);
                accuracy(test.labels(), &model.predict(test.features())?)
            };
            score().map_err(|e| e.in_fold(fold))
        })
        .collect()
}

/// Cartesian product of the grid. Names are visited in sorted order and the
/// last name varies fastest; values keep their listed order.
pub fn expand_grid(grid: &Grid) -> Result<Vec<Params>> {
    if grid.is_empty() {
        return Err(Error::invalid_arg("grid has no parameters"));
    }
    if let Some((name, _)) = grid.iter().find(|(_, v)| v.is_empty()) {
        return Err(Error::invalid_arg(format!("grid parameter '{name}' has no values")));
    }
    let mut configs = vec![Params::new()];
    for (name, values) in grid {
        configs = configs
            .into_iter()
            .flat_map(|base| {
                values.iter().map(move |v| {
                    let mut c = base.clone();
                    c.insert(name.clone(), v.clone());
                    c
                })
            })
            .collect();
    }
    Ok(configs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub config: Params,
    pub mean_score: f64,
    pub fold_scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_config: Params,
    pub best_cv_score: f64,
    pub all_results: Vec<GridCell>,
}

/// Exhaustive search by mean stratified k-fold accuracy. Every cell shares
/// the same folds; the earliest configuration wins ties.
pub fn grid_search<E: Estimator>(
    estimator: &E,
    grid: &Grid,
    data: &LabeledDataset,
    k: usize,
    seed: u64,
) -> Result<GridSearchResult> {
    let configs = expand_grid(grid)?;
    let folds = stratified_kfold(data, k, seed)?;
    let all_results = configs
        .into_par_iter()
        .map(|config| {
            let fold_scores = cross_val_score(estimator, &config, data, &folds, seed)?;
            let mean_score = fold_scores.iter().sum::<f64>() / fold_scores.len() as f64;
            Ok(GridCell { config, mean_score, fold_scores })
        })
        .collect::<Result<Vec<_>>>()?;
    let best =
        all_results
            .iter()
            .enumerate()
            .fold(0, |best, (i, cell)| if cell.mean_score > all_results[best].mean_score { i } else { best });
    Ok(GridSearchResult {
        best_config: all_results[best].config.clone(),
        best_cv_score: all_results[best].mean_score,
        all_results,
    })
}
