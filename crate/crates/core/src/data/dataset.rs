use std::fmt::Write as _;

use ndarray::{Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Label;

/// Feature matrix (`n × d`) with a binary label per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    features: Array2<f64>,
    labels: Vec<Label>,
    feature_names: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(features: Array2<f64>, labels: Vec<Label>) -> Result<Self> {
        Self::with_names(features, labels, None)
    }

    pub fn with_names(features: Array2<f64>, labels: Vec<Label>, feature_names: Option<Vec<String>>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::invalid_arg(format!("{} feature rows but {} labels", features.nrows(), labels.len())));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::invalid_data(format!("label {bad} is not binary")));
        }
        if let Some(((row, col), v)) = features.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid_data(format!("non-finite value {v} at row {row}, column {col}")));
        }
        if let Some(names) = &feature_names {
            if names.len() != features.ncols() {
                return Err(Error::invalid_arg(format!(
                    "{} feature names for {} columns",
                    names.len(),
                    features.ncols()
                )));
            }
        }
        Ok(Self { features, labels, feature_names })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn features(&self) -> &Array2<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    /// Number of samples of class 0 and class 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - ones, ones]
    }

    /// Fails unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        let [c0, c1] = self.class_counts();
        if c0 == 0 || c1 == 0 {
            return Err(Error::invalid_data(format!("both classes required, got counts {{0: {c0}, 1: {c1}}}")));
        }
        Ok(())
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            features: self.features.select(Axis(0), indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Columns at `columns`, in that order.
    pub fn select_features(&self, columns: &[usize]) -> Self {
        Self {
            features: self.features.select(Axis(1), columns),
            labels: self.labels.clone(),
            feature_names: self.feature_names.as_ref().map(|names| columns.iter().map(|&c| names[c].clone()).collect()),
        }
    }

    /// Same labels and names, new feature values of identical shape.
    pub fn with_features(&self, features: Array2<f64>) -> Result<Self> {
        if features.dim() != self.features.dim() {
            return Err(Error::invalid_arg(format!(
                "replacement features have shape {:?}, expected {:?}",
                features.dim(),
                self.features.dim()
            )));
        }
        Ok(Self { features, labels: self.labels.clone(), feature_names: self.feature_names.clone() })
    }

    /// Labels flipped `0 <-> 1`.
    pub fn relabeled(&self) -> Self {
        Self {
            features: self.features.clone(),
            labels: self.labels.iter().map(|&l| 1 - l).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Per-feature `(min, max)`. Empty for a dataset with no rows.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        if self.is_empty() {
            return Vec::new();
        }
        self.features
            .columns()
            .into_iter()
            .map(|col| col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))))
            .collect()
    }

    /// CSV text with a header row and the label in the last column.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = match &self.feature_names {
            Some(names) => names.clone(),
            None => (0..self.n_features()).map(|j| format!("x{j}")).collect(),
        };
        out.push_str(&header.join(","));
        out.push_str(",label\n");
        for (row, label) in self.features.rows().into_iter().zip(&self.labels) {
            for v in row {
                let _ = write!(out, "{v},");
            }
            let _ = writeln!(out, "{label}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn rejects_mismatched_lengths_and_non_binary_labels() {
        assert!(LabeledDataset::new(array![[1.0], [2.0]], vec![0]).is_err());
        assert!(LabeledDataset::new(array![[1.0], [2.0]], vec![0, 2]).is_err());
        assert!(LabeledDataset::new(array![[f64::NAN], [2.0]], vec![0, 1]).is_err());
    }

    #[test]
    fn subset_and_select_preserve_order() {
        let ds = LabeledDataset::with_names(
            array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]],
            vec![0, 1, 1],
            Some(vec!["a".into(), "b".into()]),
        )
        .unwrap();
        let sub = ds.subset(&[2, 0]);
        assert_eq!(sub.features(), &array![[5.0, 6.0], [1.0, 2.0]]);
        assert_eq!(sub.labels(), &[1, 0]);
        let sel = ds.select_features(&[1]);
        assert_eq!(sel.feature_names().unwrap(), &["b".to_string()]);
        assert_eq!(sel.features().column(0).to_vec(), vec![2.0, 4.0, 6.0]);
        assert_eq!(ds.class_counts(), [1, 2]);
    }

    #[test]
    fn csv_text_has_label_last() {
        let ds = LabeledDataset::new(array![[1.5, -2.0]], vec![1]).unwrap();
        assert_eq!(ds.to_csv_string(), "x0,x1,label\n1.5,-2,1\n");
    }
}
