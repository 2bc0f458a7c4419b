//! Moving-points classifiers and the evaluation harness around them.
//!
//! Two heuristic binary classifiers live here:
//!
//! - [`mpa`]: an ensemble of hyperplanes, each the affine span of `d` control
//!   points. Training moves the points toward misclassified samples in
//!   batches, with patience-based learning-rate decay and step clipping.
//! - [`smpa`]: a 2D boundary `y = s(x)` drawn as a clamped cubic spline or a
//!   PCHIP curve through `m` control points whose heights are adjusted by
//!   error-driven updates.
//!
//! The rest of the crate is the machinery needed to benchmark them:
//! synthetic data and CSV ingestion ([`data`]), spline kernels
//! ([`splines`]), small reference classifiers ([`baselines`]), and
//! cross-validation, grid search, backward feature selection, repeated-run
//! stability statistics and Welch t-tests ([`eval`]). Preset experiments
//! with their pass/fail thresholds are in [`experiments`].
//!
//! Labels are always binary and stored as `u8` values in `{0, 1}`.

pub mod baselines;
pub mod classifier;
pub mod data;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod mpa;
pub mod schedule;
pub mod smpa;
pub mod splines;

pub use classifier::{Classifier, ClassifierKind, Estimator, Params, TrainedModel};
pub use data::{LabeledDataset, RangeScaler};
pub use error::{Error, Result};

/// Binary class label, `0` or `1`.
pub type Label = u8;
