use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::Label;

fn squared_distance(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean k-nearest-neighbour majority vote. Distance ties are resolved
/// by training index; vote ties go to the single nearest neighbour's label.
pub fn knn_predict(train: &LabeledDataset, x: &Array2<f64>, k: usize) -> Result<Vec<Label>> {
    let n = train.n_samples();
    if k == 0 || k > n {
        return Err(Error::invalid_arg(format!("k must lie in [1, {n}], got {k}")));
    }
    if x.ncols() != train.n_features() {
        return Err(Error::invalid_arg(format!(
            "query has {} features, training data has {}",
            x.ncols(),
            train.n_features()
        )));
    }
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(n);
    Ok(x.rows()
        .into_iter()
        .map(|q| {
            order.clear();
            order.extend((0..n).map(|i| (squared_distance(q, train.row(i)), i)));
            let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            if k < n {
                order.select_nth_unstable_by(k - 1, cmp);
            }
            let nearest = &mut order[..k];
            nearest.sort_unstable_by(cmp);
            let ones = nearest.iter().filter(|(_, i)| train.labels()[*i] == 1).count();
            match (2 * ones).cmp(&k) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => train.labels()[nearest[0].1],
            }
        })
        .collect())
}

/// Stored training set plus `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    train: LabeledDataset,
    k: usize,
}

impl KnnModel {
    pub fn fit(train: &LabeledDataset, k: usize) -> Result<Self> {
        if k == 0 || k > train.n_samples() {
            return Err(Error::invalid_arg(format!("k must lie in [1, {}], got {k}", train.n_samples())));
        }
        Ok(Self { train: train.clone(), k })
    }

    pub fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>> {
        knn_predict(&self.train, x, self.k)
    }
}
