use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{seeded_rng, LabeledDataset};
use crate::error::{Error, Result};
use crate::Label;

/// Parameters of a random train/test partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl SplitSpec {
    pub fn new(test_fraction: f64, seed: u64, stratified: bool) -> Result<Self> {
        if !(test_fraction > 0.0 && test_fraction < 1.0) {
            return Err(Error::invalid_arg(format!("test_fraction must lie in (0, 1), got {test_fraction}")));
        }
        Ok(Self { test_fraction, seed, stratified })
    }
}

fn test_count(n: usize, fraction: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid_arg(format!("cannot split {n} samples into two nonempty parts")));
    }
    Ok(((n as f64 * fraction).round() as usize).clamp(1, n - 1))
}

/// Sorted `(train, test)` index sets for a split of `labels`.
pub fn split_indices(labels: &[Label], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    SplitSpec::new(spec.test_fraction, spec.seed, spec.stratified)?;
    let mut rng = seeded_rng(spec.seed);
    let mut test = Vec::new();
    let mut train = Vec::new();
    if spec.stratified {
        for class in 0..=1u8 {
            let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
            let k = test_count(idx.len(), spec.test_fraction)
                .map_err(|_| Error::invalid_arg(format!("class {class} has {} samples, need at least 2", idx.len())))?;
            idx.shuffle(&mut rng);
            test.extend_from_slice(&idx[..k]);
            train.extend_from_slice(&idx[k..]);
        }
    } else {
        if labels.iter().all(|&l| l == labels[0]) {
            return Err(Error::invalid_arg("both classes must be present to split"));
        }
        let mut idx: Vec<usize> = (0..labels.len()).collect();
        let k = test_count(idx.len(), spec.test_fraction)?;
        idx.shuffle(&mut rng);
        test.extend_from_slice(&idx[..k]);
        train.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Random train/test partition, deterministic given `spec.seed`.
///
/// With `stratified`, each class contributes `round(test_fraction · n_c)`
/// samples (at least one) to the test set.
pub fn train_test_split(data: &LabeledDataset, spec: &SplitSpec) -> Result<(LabeledDataset, LabeledDataset)> {
    let (train, test) = split_indices(data.labels(), spec)?;
    Ok((data.subset(&train), data.subset(&test)))
}

/// Fold index per sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_index: Vec<usize>,
    pub k: usize,
}

impl FoldAssignment {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_index.len()).filter(|&i| self.fold_index[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_index.len()).filter(|&i| self.fold_index[i] != fold).collect()
    }
}

/// Stratified k-fold assignment.
///
/// Each class is shuffled and dealt round-robin over the folds; class 1
/// starts where class 0 stopped so total fold sizes stay balanced.
pub fn stratified_kfold(data: &LabeledDataset, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::invalid_arg(format!("k must be at least 2, got {k}")));
    }
    let counts = data.class_counts();
    if let Some(class) = (0..2).find(|&c| counts[c] < k) {
        return Err(Error::invalid_arg(format!("class {class} has {} samples, fewer than k = {k}", counts[class])));
    }
    let mut rng = seeded_rng(seed);
    let mut fold_index = vec![0; data.n_samples()];
    let mut start = 0;
    for class in 0..=1u8 {
        let mut idx: Vec<usize> = (0..data.n_samples()).filter(|&i| data.labels()[i] == class).collect();
        idx.shuffle(&mut rng);
        for (j, &i) in idx.iter().enumerate() {
            fold_index[i] = (start + j) % k;
        }
        start = (start + idx.len()) % k;
    }
    Ok(FoldAssignment { fold_index, k })
}
