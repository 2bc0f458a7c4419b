use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::error::{Error, Result};
use crate::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        label: Label,
        counts: [usize; 2],
    },
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    fn predict(&self, x: ArrayView1<'_, f64>) -> Label {
        match self {
            Node::Leaf { label, .. } => *label,
            Node::Split { feature, threshold, left, right } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// Binary CART tree grown with Gini impurity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    root: Node,
    n_features: usize,
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = counts[1] as f64 / n;
    2.0 * p * (1.0 - p)
}

fn counts_of(labels: &[Label], idx: &[usize]) -> [usize; 2] {
    let ones = idx.iter().filter(|&&i| labels[i] == 1).count();
    [idx.len() - ones, ones]
}

fn leaf(counts: [usize; 2]) -> Node {
    Node::Leaf { label: Label::from(counts[1] > counts[0]), counts }
}

struct Grower<'a> {
    data: &'a LabeledDataset,
    max_depth: usize,
    min_leaf: usize,
}

impl Grower<'_> {
    /// Best `(weighted child impurity, feature, threshold)`; earlier features
    /// and lower thresholds win ties.
    fn best_split(&self, idx: &[usize]) -> Option<(f64, usize, f64)> {
        let labels = self.data.labels();
        let total = counts_of(labels, idx);
        let n = idx.len();
        let mut best: Option<(f64, usize, f64)> = None;
        let mut sorted = idx.to_vec();
        for feature in 0..self.data.n_features() {
            let value = |i: usize| self.data.row(i)[feature];
            sorted.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
            let mut left = [0usize; 2];
            for pos in 0..n - 1 {
                left[labels[sorted[pos]] as usize] += 1;
                let (lo, hi) = (value(sorted[pos]), value(sorted[pos + 1]));
                let n_left = pos + 1;
                if lo == hi || n_left < self.min_leaf || n - n_left < self.min_leaf {
                    continue;
                }
                let right = [total[0] - left[0], total[1] - left[1]];
                let impurity = (n_left as f64 * gini(left) + (n - n_left) as f64 * gini(right)) / n as f64;
                if best.is_none_or(|(b, _, _)| impurity < b - 1e-12) {
                    best = Some((impurity, feature, 0.5 * (lo + hi)));
                }
            }
        }
        best
    }

    fn grow(&self, idx: &[usize], depth: usize) -> Node {
        let labels = self.data.labels();
        let counts = counts_of(labels, idx);
        if counts[0] == 0 || counts[1] == 0 || depth >= self.max_depth || idx.len() < 2 * self.min_leaf {
            return leaf(counts);
        }
        match self.best_split(idx) {
            Some((impurity, feature, threshold)) if impurity < gini(counts) - 1e-12 => {
                let (l, r): (Vec<usize>, Vec<usize>) =
                    idx.iter().partition(|&&i| self.data.row(i)[feature] <= threshold);
                Node::Split {
                    feature,
                    threshold,
                    left: Box::new(self.grow(&l, depth + 1)),
                    right: Box::new(self.grow(&r, depth + 1)),
                }
            }
            _ => leaf(counts),
        }
    }
}

pub fn dtree_fit(train: &LabeledDataset, max_depth: usize, min_leaf: usize) -> Result<DecisionTree> {
    if max_depth == 0 || min_leaf == 0 {
        return Err(Error::invalid_arg("max_depth and min_leaf must be at least 1"));
    }
    let idx: Vec<usize> = (0..train.n_samples()).collect();
    let root = Grower { data: train, max_depth, min_leaf }.grow(&idx, 0);
    Ok(DecisionTree { root, n_features: train.n_features() })
}

impl DecisionTree {
    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>> {
        if x.ncols() != self.n_features {
            return Err(Error::invalid_arg(format!("tree expects {} features, got {}", self.n_features, x.ncols())));
        }
        Ok(x.rows().into_iter().map(|r| self.root.predict(r)).collect())
    }
}
