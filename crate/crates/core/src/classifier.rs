//! A uniform fit/predict surface over every classifier in the crate.
//!
//! Hyperparameters travel as a JSON-valued map so the same grid machinery
//! can drive any classifier. Every fit first rescales features to
//! `[-100, 100]` using ranges learned from the training data only.

use std::collections::BTreeMap;
use std::fmt;

use ndarray::Array2;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::baselines::{dtree_fit, perceptron_fit, DecisionTree, KnnModel, PerceptronModel};
use crate::data::{LabeledDataset, RangeScaler};
use crate::error::{Error, Result};
use crate::mpa::{self, MpaConfig, MpaModel};
use crate::smpa::{self, SmpaConfig, SmpaModel};
use crate::Label;

/// Hyperparameter assignment, keyed by name.
pub type Params = BTreeMap<String, Value>;

pub trait Classifier {
    fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>>;
}

/// Something that can be trained into a [`Classifier`].
pub trait Estimator: Sync {
    type Model: Classifier + Send;

    fn fit(&self, train: &LabeledDataset, params: &Params, seed: u64) -> Result<Self::Model>;

    fn name(&self) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Mpa,
    Smpa,
    Knn,
    Perceptron,
    Dtree,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 5] = [Self::Mpa, Self::Smpa, Self::Knn, Self::Perceptron, Self::Dtree];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mpa => "mpa",
            Self::Smpa => "smpa",
            Self::Knn => "knn",
            Self::Perceptron => "perceptron",
            Self::Dtree => "dtree",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// The parameter names this classifier accepts, with their defaults.
    pub fn default_params(self) -> Params {
        let value = match self {
            Self::Mpa => serde_json::to_value(MpaConfig::default()),
            Self::Smpa => serde_json::to_value(SmpaConfig::default()),
            Self::Knn => serde_json::to_value(KnnParams::default()),
            Self::Perceptron => serde_json::to_value(PerceptronParams::default()),
            Self::Dtree => serde_json::to_value(TreeParams::default()),
        };
        let Ok(Value::Object(map)) = value else { unreachable!("configs serialize to objects") };
        map.into_iter().filter(|(k, _)| k != "seed").collect()
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct KnnParams {
    k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 5 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PerceptronParams {
    rate: f64,
    epochs: usize,
}

impl Default for PerceptronParams {
    fn default() -> Self {
        Self { rate: 0.1, epochs: 100 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TreeParams {
    max_depth: usize,
    min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self { max_depth: 6, min_leaf: 1 }
    }
}

/// Overlay `params` on the serialized `defaults`, rejecting unknown names.
fn resolve<T: Serialize + DeserializeOwned>(kind: ClassifierKind, defaults: T, params: &Params) -> Result<T> {
    let Value::Object(mut map) = serde_json::to_value(defaults)? else { unreachable!("configs serialize to objects") };
    for (key, value) in params {
        match map.get_mut(key) {
            Some(slot) if key != "seed" => *slot = value.clone(),
            _ => return Err(Error::invalid_arg(format!("unknown parameter '{key}' for {kind}"))),
        }
    }
    serde_json::from_value(Value::Object(map))
        .map_err(|e| Error::invalid_arg(format!("bad parameters for {kind}: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "lowercase")]
pub enum FittedModel {
    Mpa(MpaModel),
    Smpa(SmpaModel),
    Knn(KnnModel),
    Perceptron(PerceptronModel),
    Dtree(DecisionTree),
}

/// A fitted classifier together with the scaler learned on its training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub params: Params,
    pub seed: u64,
    pub scaler: RangeScaler,
    pub model: FittedModel,
}

impl TrainedModel {
    pub fn kind(&self) -> ClassifierKind {
        match self.model {
            FittedModel::Mpa(_) => ClassifierKind::Mpa,
            FittedModel::Smpa(_) => ClassifierKind::Smpa,
            FittedModel::Knn(_) => ClassifierKind::Knn,
            FittedModel::Perceptron(_) => ClassifierKind::Perceptron,
            FittedModel::Dtree(_) => ClassifierKind::Dtree,
        }
    }

    /// Per-epoch training error counts, where the classifier records them.
    pub fn error_history(&self) -> Option<Vec<usize>> {
        match &self.model {
            FittedModel::Smpa(m) => Some(m.error_history().to_vec()),
            FittedModel::Perceptron(m) => Some(m.mistakes.clone()),
            FittedModel::Mpa(m) => {
                let histories = m.error_histories();
                let len = histories.iter().map(|h| h.len()).max().unwrap_or(0);
                Some((0..len).map(|e| histories.iter().filter_map(|h| h.get(e)).sum()).collect())
            }
            FittedModel::Knn(_) | FittedModel::Dtree(_) => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Classifier for TrainedModel {
    fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>> {
        let scaled = self.scaler.transform(x)?;
        match &self.model {
            FittedModel::Mpa(m) => m.predict(&scaled),
            FittedModel::Smpa(m) => m.predict(&scaled),
            FittedModel::Knn(m) => m.predict(&scaled),
            FittedModel::Perceptron(m) => m.predict(&scaled),
            FittedModel::Dtree(m) => m.predict(&scaled),
        }
    }
}

impl Estimator for ClassifierKind {
    type Model = TrainedModel;

    fn fit(&self, train: &LabeledDataset, params: &Params, seed: u64) -> Result<TrainedModel> {
        let scaler = RangeScaler::fit_default(train.features())?;
        let scaled = scaler.transform_dataset(train)?;
        let kind = *self;
        let model = match kind {
            ClassifierKind::Mpa => {
                let config = MpaConfig { seed, ..resolve(kind, MpaConfig::default(), params)? };
                FittedModel::Mpa(mpa::fit(&scaled, &config)?)
            }
            ClassifierKind::Smpa => {
                let config = SmpaConfig { seed, ..resolve(kind, SmpaConfig::default(), params)? };
                FittedModel::Smpa(smpa::fit(&scaled, &config)?)
            }
            ClassifierKind::Knn => {
                let p = resolve(kind, KnnParams::default(), params)?;
                FittedModel::Knn(KnnModel::fit(&scaled, p.k)?)
            }
            ClassifierKind::Perceptron => {
                let p = resolve(kind, PerceptronParams::default(), params)?;
                FittedModel::Perceptron(perceptron_fit(&scaled, p.rate, p.epochs, seed)?)
            }
            ClassifierKind::Dtree => {
                let p = resolve(kind, TreeParams::default(), params)?;
                FittedModel::Dtree(dtree_fit(&scaled, p.max_depth, p.min_leaf)?)
            }
        };
        Ok(TrainedModel { params: params.clone(), seed, scaler, model })
    }

    fn name(&self) -> String {
        self.as_str().to_owned()
    }
}
