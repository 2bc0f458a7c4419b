//! Patience-based learning-rate decay shared by both moving-points trainers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DECAY: f64 = 0.5;
pub const DEFAULT_PATIENCE: usize = 10;
/// Default floor as a fraction of the initial rate.
pub const DEFAULT_MIN_RATE_FRACTION: f64 = 1e-4;

/// Learning rate that decays after `patience` epochs without a new best
/// training error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrSchedule {
    initial_rate: f64,
    decay_factor: f64,
    patience: usize,
    min_rate: f64,
    rate: f64,
    best_error_seen: Option<usize>,
    epochs_since_improvement: usize,
}

impl LrSchedule {
    pub fn new(initial_rate: f64, decay_factor: f64, patience: usize, min_rate: f64) -> Result<Self> {
        if !(initial_rate > 0.0 && initial_rate.is_finite()) {
            return Err(Error::invalid_arg(format!("initial rate must be positive, got {initial_rate}")));
        }
        if !(decay_factor > 0.0 && decay_factor < 1.0) {
            return Err(Error::invalid_arg(format!("decay factor must lie in (0, 1), got {decay_factor}")));
        }
        if patience == 0 {
            return Err(Error::invalid_arg("patience must be positive"));
        }
        if !(min_rate > 0.0 && min_rate <= initial_rate) {
            return Err(Error::invalid_arg(format!("min rate must lie in (0, {initial_rate}], got {min_rate}")));
        }
        Ok(Self {
            initial_rate,
            decay_factor,
            patience,
            min_rate,
            rate: initial_rate,
            best_error_seen: None,
            epochs_since_improvement: 0,
        })
    }

    pub fn with_defaults(initial_rate: f64) -> Result<Self> {
        Self::new(initial_rate, DEFAULT_DECAY, DEFAULT_PATIENCE, initial_rate * DEFAULT_MIN_RATE_FRACTION)
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn initial_rate(&self) -> f64 {
        self.initial_rate
    }

    pub fn min_rate(&self) -> f64 {
        self.min_rate
    }

    pub fn patience(&self) -> usize {
        self.patience
    }

    pub fn best_error_seen(&self) -> Option<usize> {
        self.best_error_seen
    }

    pub fn epochs_since_improvement(&self) -> usize {
        self.epochs_since_improvement
    }

    /// Record one epoch's error count and decay the rate if it stagnated.
    pub fn observe(&mut self, epoch_error: usize) {
        if self.best_error_seen.is_none_or(|best| epoch_error < best) {
            self.best_error_seen = Some(epoch_error);
            self.epochs_since_improvement = 0;
        } else {
            self.epochs_since_improvement += 1;
        }
        if self.epochs_since_improvement >= self.patience {
            self.rate = (self.rate * self.decay_factor).max(self.min_rate);
            self.epochs_since_improvement = 0;
        }
    }
}

/// Functional form of [`LrSchedule::observe`].
pub fn adapt_learning_rate(mut schedule: LrSchedule, epoch_error: usize) -> LrSchedule {
    schedule.observe(epoch_error);
    schedule
}
