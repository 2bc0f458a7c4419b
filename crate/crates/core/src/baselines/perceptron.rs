use ndarray::{Array1, Array2};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::{seeded_rng, LabeledDataset};
use crate::error::{Error, Result};
use crate::Label;

/// Linear model `w · x + b`, positive side predicts class 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerceptronModel {
    pub weights: Array1<f64>,
    pub bias: f64,
    /// Mistakes made during each epoch; training stops after a clean epoch.
    pub mistakes: Vec<usize>,
}

/// Classic mistake-driven perceptron over seeded shuffles.
pub fn perceptron_fit(train: &LabeledDataset, rate: f64, epochs: usize, seed: u64) -> Result<PerceptronModel> {
    train.require_both_classes()?;
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::invalid_arg(format!("rate must be positive, got {rate}")));
    }
    let mut rng = seeded_rng(seed);
    let mut weights = Array1::zeros(train.n_features());
    let mut bias = 0.0;
    let mut mistakes = Vec::new();
    let mut order: Vec<usize> = (0..train.n_samples()).collect();
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        let mut count = 0;
        for &i in &order {
            let x = train.row(i);
            let y = if train.labels()[i] == 1 { 1.0 } else { -1.0 };
            if y * (weights.dot(&x) + bias) <= 0.0 {
                weights.scaled_add(rate * y, &x);
                bias += rate * y;
                count += 1;
            }
        }
        mistakes.push(count);
        if count == 0 {
            break;
        }
    }
    Ok(PerceptronModel { weights, bias, mistakes })
}

impl PerceptronModel {
    pub fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>> {
        if x.ncols() != self.weights.len() {
            return Err(Error::invalid_arg(format!(
                "model expects {} features, got {}",
                self.weights.len(),
                x.ncols()
            )));
        }
        Ok(x.rows().into_iter().map(|r| Label::from(self.weights.dot(&r) + self.bias > 0.0)).collect())
    }
}
