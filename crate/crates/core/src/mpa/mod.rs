//! Linear moving-points classifier.
//!
//! Each ensemble member is a hyperplane spanned by `d` control points.
//! Training nudges the control point nearest to each misclassified sample
//! along the plane normal, in batches, with clipped steps and a
//! patience-decayed learning rate. Prediction is a majority vote over an odd
//! number of members.

mod geometry;
mod member;

pub use geometry::{affinely_independent, clip_step, hyperplane_from_points, init_centroid, init_random, Hyperplane};
pub use member::{HyperplaneMember, MoveLimits};

use ndarray::Array2;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{seeded_rng, LabeledDataset};
use crate::error::{Error, Result};
use crate::schedule::{LrSchedule, DEFAULT_MIN_RATE_FRACTION};
use crate::Label;

/// Fraction of each feature range the control-point box extends past the data.
pub const BOX_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitMode {
    Random,
    Centroid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpaConfig {
    /// Requested ensemble size; even values are bumped to the next odd one.
    pub n_members: usize,
    pub epochs: usize,
    pub batch_size: usize,
    /// Fraction of a misclassified sample's distance a control point moves.
    /// Values above 1 carry the boundary past the sample; at or below 1 it
    /// only approaches a lone offender and never flips it.
    pub initial_rate: f64,
    pub decay_factor: f64,
    pub patience: usize,
    /// Per-feature step cap as a fraction of that feature's range.
    pub clip_fraction: f64,
    pub init: InitMode,
    /// Train each member on a bootstrap resample instead of the full set.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for MpaConfig {
    fn default() -> Self {
        Self {
            n_members: 3,
            epochs: 300,
            batch_size: 32,
            initial_rate: 1.5,
            decay_factor: 0.5,
            patience: 10,
            clip_fraction: 0.05,
            init: InitMode::Random,
            bootstrap: false,
            seed: 0,
        }
    }
}

impl MpaConfig {
    pub fn effective_members(&self) -> usize {
        if self.n_members.is_multiple_of(2) {
            self.n_members + 1
        } else {
            self.n_members
        }
    }

    fn schedule(&self) -> Result<LrSchedule> {
        LrSchedule::new(
            self.initial_rate,
            self.decay_factor,
            self.patience,
            self.initial_rate * DEFAULT_MIN_RATE_FRACTION,
        )
    }
}

/// Fitted ensemble of hyperplane members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpaModel {
    members: Vec<HyperplaneMember>,
    data_bounds: Vec<(f64, f64)>,
    config: MpaConfig,
}

fn bootstrap_sample<R: Rng>(train: &LabeledDataset, rng: &mut R) -> LabeledDataset {
    let n = train.n_samples();
    loop {
        let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let sample = train.subset(&idx);
        if sample.require_both_classes().is_ok() {
            return sample;
        }
    }
}

fn fit_member(train: &LabeledDataset, config: &MpaConfig, limits: &MoveLimits, seed: u64) -> Result<HyperplaneMember> {
    let mut rng = seeded_rng(seed);
    let data = if config.bootstrap { bootstrap_sample(train, &mut rng) } else { train.clone() };
    let bounds = data.bounds();
    let points = match config.init {
        InitMode::Random => init_random(&bounds, rng.next_u64())?,
        InitMode::Centroid => init_centroid(&data)?,
    };
    let mut member = HyperplaneMember::new(points, 1, config.schedule()?)?;
    member.reorient(&data);
    for _ in 0..config.epochs {
        member.train_epoch(&data, config.batch_size, limits, &mut rng);
    }
    Ok(member)
}

/// Train an ensemble on `train`.
pub fn fit(train: &LabeledDataset, config: &MpaConfig) -> Result<MpaModel> {
    train.require_both_classes()?;
    if train.n_features() < 2 {
        return Err(Error::invalid_arg(format!("MPA needs at least 2 features, got {}", train.n_features())));
    }
    if config.n_members == 0 || config.batch_size == 0 {
        return Err(Error::invalid_arg("n_members and batch_size must be positive"));
    }
    if !(config.clip_fraction > 0.0) {
        return Err(Error::invalid_arg(format!("clip_fraction must be positive, got {}", config.clip_fraction)));
    }
    config.schedule()?;

    let mut config = config.clone();
    config.n_members = config.effective_members();
    let data_bounds = train.bounds();
    let limits = MoveLimits::from_bounds(&data_bounds, BOX_SLACK, config.clip_fraction);
    let mut seeder = seeded_rng(config.seed);
    let seeds: Vec<u64> = (0..config.n_members).map(|_| seeder.next_u64()).collect();
    let members = seeds.par_iter().map(|&s| fit_member(train, &config, &limits, s)).collect::<Result<Vec<_>>>()?;
    Ok(MpaModel { members, data_bounds, config })
}

impl MpaModel {
    pub fn members(&self) -> &[HyperplaneMember] {
        &self.members
    }

    pub fn config(&self) -> &MpaConfig {
        &self.config
    }

    pub fn data_bounds(&self) -> &[(f64, f64)] {
        &self.data_bounds
    }

    /// Majority vote over members.
    pub fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>> {
        let d = self.data_bounds.len();
        if x.ncols() != d {
            return Err(Error::invalid_arg(format!("model expects {d} features, got {}", x.ncols())));
        }
        let k = self.members.len();
        Ok(x.rows()
            .into_iter()
            .map(|row| {
                let ones = self.members.iter().filter(|m| m.predict_one(row) == 1).count();
                Label::from(2 * ones > k)
            })
            .collect())
    }

    /// Per-epoch error counts, one series per member.
    pub fn error_histories(&self) -> Vec<&[usize]> {
        self.members.iter().map(|m| m.error_history()).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
