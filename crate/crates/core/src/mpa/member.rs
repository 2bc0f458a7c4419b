use ndarray::{Array1, Array2, ArrayView1};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::geometry::{clip_step, hyperplane_from_points, Hyperplane};
use crate::data::LabeledDataset;
use crate::error::Result;
use crate::schedule::LrSchedule;
use crate::Label;

/// Box the control points must stay inside, plus per-feature step caps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveLimits {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub clip: Vec<f64>,
}

impl MoveLimits {
    /// Data bounds widened by `slack` of each range; steps capped at
    /// `clip_fraction` of each range.
    pub fn from_bounds(bounds: &[(f64, f64)], slack: f64, clip_fraction: f64) -> Self {
        let mut lower = Vec::with_capacity(bounds.len());
        let mut upper = Vec::with_capacity(bounds.len());
        let mut clip = Vec::with_capacity(bounds.len());
        for &(lo, hi) in bounds {
            let range = hi - lo;
            lower.push(lo - slack * range);
            upper.push(hi + slack * range);
            clip.push(clip_fraction * range);
        }
        Self { lower, upper, clip }
    }

    fn project(&self, point: &mut ndarray::ArrayViewMut1<'_, f64>) {
        for (j, v) in point.iter_mut().enumerate() {
            *v = v.clamp(self.lower[j], self.upper[j]);
        }
    }
}

/// One hyperplane of the ensemble: `d` control points and the plane they span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneMember {
    control_points: Array2<f64>,
    normal: Array1<f64>,
    offset: f64,
    /// Class assigned to points with non-negative signed distance.
    positive_label: Label,
    schedule: LrSchedule,
    error_history: Vec<usize>,
}

impl HyperplaneMember {
    pub fn new(control_points: Array2<f64>, positive_label: Label, schedule: LrSchedule) -> Result<Self> {
        let Hyperplane { normal, offset } = hyperplane_from_points(&control_points)?;
        Ok(Self { control_points, normal, offset, positive_label, schedule, error_history: Vec::new() })
    }

    pub fn control_points(&self) -> &Array2<f64> {
        &self.control_points
    }

    pub fn normal(&self) -> &Array1<f64> {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn positive_label(&self) -> Label {
        self.positive_label
    }

    pub fn schedule(&self) -> &LrSchedule {
        &self.schedule
    }

    pub fn error_history(&self) -> &[usize] {
        &self.error_history
    }

    pub fn signed_distance(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.normal.dot(&x) - self.offset
    }

    pub fn predict_one(&self, x: ArrayView1<'_, f64>) -> Label {
        if self.signed_distance(x) >= 0.0 {
            self.positive_label
        } else {
            1 - self.positive_label
        }
    }

    pub fn count_errors(&self, data: &LabeledDataset) -> usize {
        (0..data.n_samples()).filter(|&i| self.predict_one(data.row(i)) != data.labels()[i]).count()
    }

    /// Pick the side assignment with fewer training errors; ties keep the
    /// current one.
    pub fn reorient(&mut self, data: &LabeledDataset) {
        let errors = self.count_errors(data);
        if data.n_samples() - errors < errors {
            self.positive_label = 1 - self.positive_label;
        }
    }

    fn nearest_control_point(&self, x: ArrayView1<'_, f64>) -> usize {
        let mut best = (0, f64::INFINITY);
        for (j, p) in self.control_points.rows().into_iter().enumerate() {
            let dist: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
            if dist < best.1 {
                best = (j, dist);
            }
        }
        best.0
    }

    /// Apply the mean accumulated displacement of every touched control
    /// point, clipped and kept inside the box, then refit the plane.
    ///
    /// A batch that would make the points affinely dependent is discarded.
    fn apply_batch(&mut self, sums: &mut Array2<f64>, counts: &mut [usize], limits: &MoveLimits) {
        if counts.iter().all(|&c| c == 0) {
            return;
        }
        let previous = self.control_points.clone();
        for (j, count) in counts.iter_mut().enumerate() {
            if *count == 0 {
                continue;
            }
            let mean = sums.row(j).to_owned() / *count as f64;
            let step = clip_step(&mean, &limits.clip);
            debug_assert!(step.iter().zip(&limits.clip).all(|(s, l)| s.abs() <= *l));
            let mut point = self.control_points.row_mut(j);
            point += &step;
            limits.project(&mut point);
            *count = 0;
        }
        sums.fill(0.0);

        match hyperplane_from_points(&self.control_points) {
            Ok(Hyperplane { normal, offset }) => {
                // keep the half-space meaning when the canonical sign flips
                if normal.dot(&self.normal) < 0.0 {
                    self.positive_label = 1 - self.positive_label;
                }
                self.normal = normal;
                self.offset = offset;
            }
            Err(_) => self.control_points = previous,
        }
    }

    /// One pass over `train` in shuffled order.
    ///
    /// Each misclassified sample proposes moving its nearest control point
    /// toward it along the normal by `rate · signed_distance`. Proposals are
    /// averaged per point and applied every `batch_size` samples. Returns the
    /// number of samples misclassified at the moment they were visited.
    pub fn train_epoch<R: Rng>(
        &mut self,
        train: &LabeledDataset,
        batch_size: usize,
        limits: &MoveLimits,
        rng: &mut R,
    ) -> usize {
        let batch_size = batch_size.max(1);
        self.reorient(train);
        let (n, d) = (train.n_samples(), train.n_features());
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut sums = Array2::zeros((d, d));
        let mut counts = vec![0usize; d];
        let mut errors = 0;
        let rate = self.schedule.rate();
        for (visited, &i) in order.iter().enumerate() {
            let x = train.row(i);
            if self.predict_one(x) != train.labels()[i] {
                errors += 1;
                let j = self.nearest_control_point(x);
                let along = (&x - &self.control_points.row(j)).dot(&self.normal);
                let mut acc = sums.row_mut(j);
                acc.scaled_add(rate * along, &self.normal);
                counts[j] += 1;
            }
            if (visited + 1) % batch_size == 0 {
                self.apply_batch(&mut sums, &mut counts, limits);
            }
        }
        self.apply_batch(&mut sums, &mut counts, limits);

        self.schedule.observe(errors);
        self.error_history.push(errors);
        errors
    }
}
