use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{Error, Result};

pub const DEFAULT_TARGET_LO: f64 = -100.0;
pub const DEFAULT_TARGET_HI: f64 = 100.0;

/// Per-feature affine map from the fitted `[min, max]` onto
/// `[target_lo, target_hi]`.
///
/// Constant features (min == max) map to the midpoint of the target
/// interval and back to the recorded constant. Values outside the fitted
/// range extrapolate linearly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeScaler {
    per_feature_min: Vec<f64>,
    per_feature_max: Vec<f64>,
    target_lo: f64,
    target_hi: f64,
}

pub fn fit_scaler(data: &LabeledDataset, target_lo: f64, target_hi: f64) -> Result<RangeScaler> {
    RangeScaler::fit(data.features(), target_lo, target_hi)
}

impl RangeScaler {
    pub fn fit(features: &Array2<f64>, target_lo: f64, target_hi: f64) -> Result<Self> {
        if features.nrows() == 0 {
            return Err(Error::invalid_data("cannot fit a scaler on an empty dataset"));
        }
        if !(target_lo < target_hi) || !target_lo.is_finite() || !target_hi.is_finite() {
            return Err(Error::invalid_arg(format!("target interval [{target_lo}, {target_hi}] is empty")));
        }
        let (per_feature_min, per_feature_max) = features
            .columns()
            .into_iter()
            .map(|col| col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))))
            .unzip();
        Ok(Self { per_feature_min, per_feature_max, target_lo, target_hi })
    }

    /// Fit onto the default `[-100, 100]` interval.
    pub fn fit_default(features: &Array2<f64>) -> Result<Self> {
        Self::fit(features, DEFAULT_TARGET_LO, DEFAULT_TARGET_HI)
    }

    pub fn min(&self) -> &[f64] {
        &self.per_feature_min
    }

    pub fn max(&self) -> &[f64] {
        &self.per_feature_max
    }

    pub fn target(&self) -> (f64, f64) {
        (self.target_lo, self.target_hi)
    }

    pub fn is_constant(&self, feature: usize) -> bool {
        self.per_feature_min[feature] == self.per_feature_max[feature]
    }

    fn check_columns(&self, x: &Array2<f64>) -> Result<()> {
        if x.ncols() != self.per_feature_min.len() {
            return Err(Error::invalid_arg(format!(
                "scaler fitted on {} features, got {}",
                self.per_feature_min.len(),
                x.ncols()
            )));
        }
        Ok(())
    }

    pub fn transform(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        self.check_columns(x)?;
        let mid = 0.5 * (self.target_lo + self.target_hi);
        let width = self.target_hi - self.target_lo;
        let mut out = x.clone();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            let (lo, hi) = (self.per_feature_min[j], self.per_feature_max[j]);
            if lo == hi {
                col.fill(mid);
            } else {
                col.mapv_inplace(|v| self.target_lo + (v - lo) / (hi - lo) * width);
            }
        }
        Ok(out)
    }

    pub fn inverse_transform(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        self.check_columns(x)?;
        let width = self.target_hi - self.target_lo;
        let mut out = x.clone();
        for (j, mut col) in out.columns_mut().into_iter().enumerate() {
            let (lo, hi) = (self.per_feature_min[j], self.per_feature_max[j]);
            if lo == hi {
                col.fill(lo);
            } else {
                col.mapv_inplace(|v| lo + (v - self.target_lo) / width * (hi - lo));
            }
        }
        Ok(out)
    }

    pub fn transform_dataset(&self, data: &LabeledDataset) -> Result<LabeledDataset> {
        data.with_features(self.transform(data.features())?)
    }
}
