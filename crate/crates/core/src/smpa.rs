//! Spline moving-points classifier for two features.
//!
//! The boundary is `y = s(x)` where `s` interpolates `m` control points with
//! fixed, evenly spaced abscissae. Class membership is the sign of the
//! vertical residual `y - s(x)`. Each epoch, every misclassified sample (and
//! every correct sample inside its adaptive margin) proposes a height change
//! for its nearest control point; proposals are averaged per point and
//! applied together.

use ndarray::Array2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::{seeded_rng, LabeledDataset};
use crate::error::{Error, Result};
use crate::schedule::{LrSchedule, DEFAULT_MIN_RATE_FRACTION};
use crate::splines::{KnotSet, PiecewiseCubic, SplineKind};
use crate::Label;

pub const LAMBDA_MIN: f64 = 0.1;
pub const LAMBDA_MAX: f64 = 10.0;
/// Fraction of the y range the control points may travel past the data.
pub const Y_SLACK: f64 = 0.1;
/// Opposite-class guidance is searched within this many knot spacings.
pub const GUIDANCE_WINDOW: f64 = 2.0;

/// Scaling applied to the distance between a sample and its nearest knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaStrategy {
    Log,
    Sqrt,
    None,
}

impl LambdaStrategy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "log" => Some(Self::Log),
            "sqrt" => Some(Self::Sqrt),
            "none" => Some(Self::None),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Log => "log",
            Self::Sqrt => "sqrt",
            Self::None => "none",
        }
    }

    /// `λ(distance)`, clamped to `[LAMBDA_MIN, LAMBDA_MAX]`.
    pub fn lambda(self, distance: f64) -> f64 {
        let raw = match self {
            Self::Log => distance.ln_1p(),
            Self::Sqrt => distance.sqrt(),
            Self::None => 1.0,
        };
        raw.clamp(LAMBDA_MIN, LAMBDA_MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmpaConfig {
    /// Number of control points.
    pub m: usize,
    pub kind: SplineKind,
    pub lambda: LambdaStrategy,
    pub epochs: usize,
    pub initial_rate: f64,
    pub decay_factor: f64,
    pub patience: usize,
    /// Half-width of the margin band, in scaled feature units, before the
    /// per-knot factor is applied.
    pub base_margin: f64,
    pub seed: u64,
}

impl Default for SmpaConfig {
    fn default() -> Self {
        Self {
            m: 8,
            kind: SplineKind::Pchip,
            lambda: LambdaStrategy::Sqrt,
            epochs: 300,
            initial_rate: 0.5,
            decay_factor: 0.5,
            patience: 20,
            base_margin: 20.0,
            seed: 0,
        }
    }
}

impl SmpaConfig {
    fn validate(&self) -> Result<LrSchedule> {
        if self.m < 2 {
            return Err(Error::invalid_arg(format!("need at least 2 control points, got {}", self.m)));
        }
        if !(self.base_margin >= 0.0 && self.base_margin.is_finite()) {
            return Err(Error::invalid_arg(format!("base margin must be non-negative, got {}", self.base_margin)));
        }
        LrSchedule::new(
            self.initial_rate,
            self.decay_factor,
            self.patience,
            self.initial_rate * DEFAULT_MIN_RATE_FRACTION,
        )
    }
}

fn require_2d(data: &LabeledDataset) -> Result<()> {
    if data.n_features() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, got: data.n_features() });
    }
    Ok(())
}

/// Evenly spaced control points over the training x-range with heights
/// drawn uniformly from the training y-range.
pub fn init_control_points(train: &LabeledDataset, m: usize, seed: u64) -> Result<KnotSet> {
    require_2d(train)?;
    if m < 2 {
        return Err(Error::invalid_arg(format!("need at least 2 control points, got {m}")));
    }
    if train.is_empty() {
        return Err(Error::invalid_data("cannot place control points without data"));
    }
    let bounds = train.bounds();
    let ((x_lo, x_hi), (y_lo, y_hi)) = (bounds[0], bounds[1]);
    let step = (x_hi - x_lo) / (m - 1) as f64;
    let xs: Vec<f64> = (0..m).map(|i| if i + 1 == m { x_hi } else { x_lo + step * i as f64 }).collect();
    let mut rng = seeded_rng(seed);
    let ys = (0..m).map(|_| if y_lo == y_hi { y_lo } else { rng.random_range(y_lo..=y_hi) }).collect();
    KnotSet::new(xs, ys).map_err(|e| Error::invalid_data(format!("training x-range too narrow: {e}")))
}

/// `base_margin · λ(distance from x to the nearest knot)`.
pub fn adaptive_margin(x: f64, knots: &KnotSet, base_margin: f64, strategy: LambdaStrategy) -> f64 {
    let nearest = knots.xs()[knots.nearest(x)];
    base_margin * strategy.lambda((x - nearest).abs())
}

/// Spline boundary under training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplineBoundaryState {
    knots: KnotSet,
    spline: PiecewiseCubic,
    /// Class occupying `y >= s(x)`.
    orientation: Label,
    schedule: LrSchedule,
    base_margin: f64,
    lambda: LambdaStrategy,
    y_limits: (f64, f64),
    error_history: Vec<usize>,
}

impl SplineBoundaryState {
    pub fn new(
        knots: KnotSet,
        kind: SplineKind,
        orientation: Label,
        schedule: LrSchedule,
        base_margin: f64,
        lambda: LambdaStrategy,
        y_limits: (f64, f64),
    ) -> Self {
        let spline = kind.fit(&knots);
        Self { knots, spline, orientation, schedule, base_margin, lambda, y_limits, error_history: Vec::new() }
    }

    pub fn knots(&self) -> &KnotSet {
        &self.knots
    }

    pub fn spline(&self) -> &PiecewiseCubic {
        &self.spline
    }

    pub fn kind(&self) -> SplineKind {
        self.spline.kind()
    }

    pub fn orientation(&self) -> Label {
        self.orientation
    }

    pub fn schedule(&self) -> &LrSchedule {
        &self.schedule
    }

    pub fn error_history(&self) -> &[usize] {
        &self.error_history
    }

    pub fn y_limits(&self) -> (f64, f64) {
        self.y_limits
    }

    pub fn residual(&self, x: f64, y: f64) -> f64 {
        y - self.spline.eval(x)
    }

    pub fn classify(&self, x: f64, y: f64) -> Label {
        label_for_residual(self.residual(x, y), self.orientation)
    }

    fn knot_spacing(&self) -> f64 {
        let xs = self.knots.xs();
        (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64
    }

    fn set_orientation(&mut self, orientation: Label) {
        self.orientation = orientation;
    }

    fn refit(&mut self) {
        self.spline = self.spline.kind().fit(&self.knots);
    }
}

fn label_for_residual(r: f64, orientation: Label) -> Label {
    if r >= 0.0 {
        orientation
    } else {
        1 - orientation
    }
}

/// A training sample presented to [`corrective_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: f64,
    pub y: f64,
    pub label: Label,
}

/// Height change proposed for one control point.
///
/// For a misclassified sample the nearest correctly classified
/// opposite-class point within the guidance window (nearest in x, ties to
/// the lower index) gives a target height halfway between the two; without
/// such a point the knot moves by half the sample's residual. A correctly
/// classified sample inside its margin pushes the boundary away by half the
/// remaining margin. End knots take half steps, and the result is clamped
/// to keep the knot inside the y limits.
pub fn corrective_step(
    sample: Sample,
    state: &SplineBoundaryState,
    train: &LabeledDataset,
    predictions: &[Label],
) -> (usize, f64) {
    let k = state.knots.nearest(sample.x);
    let m = state.knots.len();
    let knot_y = state.knots.ys()[k];
    let lambda = state.lambda.lambda((sample.x - state.knots.xs()[k]).abs());
    let scale = state.schedule.rate() * lambda;
    let r = state.residual(sample.x, sample.y);

    let mut dy = if label_for_residual(r, state.orientation) == sample.label {
        let margin = adaptive_margin(sample.x, &state.knots, state.base_margin, state.lambda);
        let side = if r >= 0.0 { 1.0 } else { -1.0 };
        -scale * 0.5 * side * (margin - r.abs()).max(0.0)
    } else {
        let window = GUIDANCE_WINDOW * state.knot_spacing();
        let mut guide: Option<(f64, f64)> = None;
        for i in 0..train.n_samples() {
            let label = train.labels()[i];
            if label == sample.label || predictions[i] != label {
                continue;
            }
            let (gx, gy) = (train.row(i)[0], train.row(i)[1]);
            let dist = (gx - sample.x).abs();
            if dist <= window && guide.is_none_or(|(best, _)| dist < best) {
                guide = Some((dist, gy));
            }
        }
        match guide {
            Some((_, gy)) => scale * (0.5 * (sample.y + gy) - knot_y),
            None => scale * 0.5 * r,
        }
    };
    if k == 0 || k == m - 1 {
        dy *= 0.5;
    }
    let (lo, hi) = state.y_limits;
    (k, (knot_y + dy).clamp(lo, hi) - knot_y)
}

fn count_errors(residuals: &[f64], labels: &[Label], orientation: Label) -> usize {
    residuals.iter().zip(labels).filter(|(&r, &l)| label_for_residual(r, orientation) != l).count()
}

/// Error-minimizing orientation. Ties keep `current`, or when there is no
/// current orientation yet, put the class with the larger mean y above.
fn choose_orientation(residuals: &[f64], train: &LabeledDataset, current: Option<Label>) -> Label {
    let labels = train.labels();
    let errors_one = count_errors(residuals, labels, 1);
    let errors_zero = labels.len() - errors_one;
    match errors_one.cmp(&errors_zero) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Greater => 0,
        std::cmp::Ordering::Equal => current.unwrap_or_else(|| {
            let mut sums = [0.0; 2];
            let counts = train.class_counts();
            for (i, &l) in labels.iter().enumerate() {
                sums[l as usize] += train.row(i)[1];
            }
            let mean = |c: usize| sums[c] / counts[c].max(1) as f64;
            Label::from(mean(1) >= mean(0))
        }),
    }
}

/// One epoch: pick the orientation, count errors, then apply the averaged
/// corrective steps of every violating sample. Returns the error count of
/// the boundary as it stood at the start of the epoch.
pub fn train_epoch(state: &mut SplineBoundaryState, train: &LabeledDataset) -> usize {
    let residuals: Vec<f64> =
        (0..train.n_samples()).map(|i| state.residual(train.row(i)[0], train.row(i)[1])).collect();
    let orientation = choose_orientation(&residuals, train, Some(state.orientation));
    state.set_orientation(orientation);
    let predictions: Vec<Label> = residuals.iter().map(|&r| label_for_residual(r, orientation)).collect();
    let errors = predictions.iter().zip(train.labels()).filter(|(p, l)| p != l).count();

    let m = state.knots.len();
    let mut sums = vec![0.0; m];
    let mut counts = vec![0usize; m];
    for (i, &r) in residuals.iter().enumerate() {
        let (x, y, label) = (train.row(i)[0], train.row(i)[1], train.labels()[i]);
        let violates =
            predictions[i] != label || r.abs() < adaptive_margin(x, &state.knots, state.base_margin, state.lambda);
        if violates {
            let (k, dy) = corrective_step(Sample { x, y, label }, state, train, &predictions);
            sums[k] += dy;
            counts[k] += 1;
        }
    }
    let mut moved = false;
    for k in 0..m {
        if counts[k] > 0 {
            let (lo, hi) = state.y_limits;
            let y = (state.knots.ys()[k] + sums[k] / counts[k] as f64).clamp(lo, hi);
            debug_assert!((lo..=hi).contains(&y));
            if y != state.knots.ys()[k] {
                state.knots.set_y(k, y);
                moved = true;
            }
        }
    }
    if moved {
        state.refit();
    }
    state.schedule.observe(errors);
    state.error_history.push(errors);
    errors
}

/// Fitted spline classifier: the lowest-training-error boundary seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmpaModel {
    knots: KnotSet,
    spline: PiecewiseCubic,
    orientation: Label,
    best_error: usize,
    best_epoch: usize,
    error_history: Vec<usize>,
    config: SmpaConfig,
}

pub fn fit(train: &LabeledDataset, config: &SmpaConfig) -> Result<SmpaModel> {
    require_2d(train)?;
    train.require_both_classes()?;
    let schedule = config.validate()?;
    let knots = init_control_points(train, config.m, config.seed)?;
    let (y_lo, y_hi) = train.bounds()[1];
    let slack = Y_SLACK * (y_hi - y_lo);
    let mut state = SplineBoundaryState::new(
        knots,
        config.kind,
        1,
        schedule,
        config.base_margin,
        config.lambda,
        (y_lo - slack, y_hi + slack),
    );
    let residuals: Vec<f64> =
        (0..train.n_samples()).map(|i| state.residual(train.row(i)[0], train.row(i)[1])).collect();
    state.set_orientation(choose_orientation(&residuals, train, None));

    let mut best: Option<(usize, usize, KnotSet, PiecewiseCubic, Label)> = None;
    for epoch in 0..config.epochs {
        let snapshot = (state.knots.clone(), state.spline.clone());
        let errors = train_epoch(&mut state, train);
        if best.as_ref().is_none_or(|b| errors < b.0) {
            // errors describe the boundary before this epoch's update
            best = Some((errors, epoch, snapshot.0, snapshot.1, state.orientation));
        }
    }
    let (best_error, best_epoch, knots, spline, orientation) = match best {
        Some(b) => b,
        None => {
            let errors = count_errors(&residuals, train.labels(), state.orientation);
            (errors, 0, state.knots.clone(), state.spline.clone(), state.orientation)
        }
    };
    Ok(SmpaModel {
        knots,
        spline,
        orientation,
        best_error,
        best_epoch,
        error_history: state.error_history,
        config: config.clone(),
    })
}

impl SmpaModel {
    pub fn knots(&self) -> &KnotSet {
        &self.knots
    }

    pub fn spline(&self) -> &PiecewiseCubic {
        &self.spline
    }

    pub fn orientation(&self) -> Label {
        self.orientation
    }

    pub fn best_error(&self) -> usize {
        self.best_error
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn error_history(&self) -> &[usize] {
        &self.error_history
    }

    pub fn config(&self) -> &SmpaConfig {
        &self.config
    }

    pub fn classify(&self, x: f64, y: f64) -> Label {
        label_for_residual(y - self.spline.eval(x), self.orientation)
    }

    pub fn predict(&self, x: &Array2<f64>) -> Result<Vec<Label>> {
        if x.ncols() != 2 {
            return Err(Error::invalid_arg(format!("spline model expects 2 features, got {}", x.ncols())));
        }
        Ok(x.rows().into_iter().map(|r| self.classify(r[0], r[1])).collect())
    }

    /// `n_points` evenly spaced `(x, s(x))` pairs across the knot range.
    pub fn boundary_trace(&self, n_points: usize) -> Result<Vec<(f64, f64)>> {
        if n_points < 2 {
            return Err(Error::invalid_arg(format!("trace needs at least 2 points, got {n_points}")));
        }
        let xs = self.knots.xs();
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        let step = (hi - lo) / (n_points - 1) as f64;
        Ok((0..n_points)
            .map(|i| {
                let x = if i + 1 == n_points { hi } else { lo + step * i as f64 };
                (x, self.spline.eval(x))
            })
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn flat_state(orientation: Label, base_margin: f64, lambda: LambdaStrategy) -> SplineBoundaryState {
        let knots = KnotSet::new(vec![-10.0, -5.0, 0.0, 5.0, 10.0], vec![0.0; 5]).unwrap();
        SplineBoundaryState::new(
            knots,
            SplineKind::Pchip,
            orientation,
            LrSchedule::with_defaults(0.1).unwrap(),
            base_margin,
            lambda,
            (-100.0, 100.0),
        )
    }

    #[test]
    fn lambda_strategies() {
        let knots = KnotSet::new(vec![0.0, 10.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(adaptive_margin(3.3, &knots, 2.0, LambdaStrategy::None), 2.0);
        assert_eq!(adaptive_margin(0.0, &knots, 2.0, LambdaStrategy::Log), 0.2);
        assert_eq!(adaptive_margin(4.0, &knots, 2.0, LambdaStrategy::Sqrt), 4.0);
        assert_eq!(LambdaStrategy::Sqrt.lambda(1e6), LAMBDA_MAX);
    }

    #[test]
    fn init_spacing_and_ranges() {
        let ds = LabeledDataset::new(array![[0.0, 3.0], [10.0, 5.0]], vec![0, 1]).unwrap();
        assert_eq!(init_control_points(&ds, 2, 0).unwrap().xs(), &[0.0, 10.0]);
        let wide = LabeledDataset::new(array![[-100.0, -1.0], [100.0, 1.0]], vec![0, 1]).unwrap();
        let k = init_control_points(&wide, 5, 3).unwrap();
        assert_eq!(k.xs(), &[-100.0, -50.0, 0.0, 50.0, 100.0]);
        assert!(k.ys().iter().all(|y| (-1.0..=1.0).contains(y)));
        let three_d = LabeledDataset::new(array![[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]], vec![0, 1]).unwrap();
        assert!(matches!(init_control_points(&three_d, 4, 0), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn classify_by_residual_sign() {
        let s = flat_state(1, 0.0, LambdaStrategy::None);
        assert_eq!(s.classify(0.0, 5.0), 1);
        assert_eq!(s.classify(0.0, -5.0), 0);
        assert_eq!(s.classify(2.5, 0.0), 1);
        let flipped = flat_state(0, 0.0, LambdaStrategy::None);
        for (x, y) in [(0.0, 5.0), (3.0, -2.0), (-40.0, 0.0)] {
            assert_ne!(s.classify(x, y), flipped.classify(x, y));
        }
    }

    #[test]
    fn conservative_step_without_guidance() {
        let s = flat_state(0, 0.0, LambdaStrategy::None);
        // above the boundary (predicted 0) but labelled 1, no class-0 points around
        let ds = LabeledDataset::new(array![[0.0, 4.0]], vec![1]).unwrap();
        let preds = vec![0];
        let (k, dy) = corrective_step(Sample { x: 0.0, y: 4.0, label: 1 }, &s, &ds, &preds);
        assert_eq!(k, 2);
        assert!((dy - 0.2).abs() < 1e-12);
        let (k, dy) = corrective_step(Sample { x: -10.0, y: 4.0, label: 1 }, &s, &ds, &preds);
        assert_eq!(k, 0);
        assert!((dy - 0.1).abs() < 1e-12);
    }

    #[test]
    fn informed_step_targets_midpoint() {
        let knots = KnotSet::new(vec![-10.0, -5.0, 0.0, 5.0, 10.0], vec![0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        let s = SplineBoundaryState::new(
            knots,
            SplineKind::Pchip,
            1,
            LrSchedule::with_defaults(0.1).unwrap(),
            0.0,
            LambdaStrategy::None,
            (-100.0, 100.0),
        );
        // (0, 2) labelled 1 sits below s(0) = 3; (0, -2) is a correctly classified class-0 point
        let ds = LabeledDataset::new(array![[0.0, 2.0], [0.0, -2.0]], vec![1, 0]).unwrap();
        let preds: Vec<Label> = (0..2).map(|i| s.classify(ds.row(i)[0], ds.row(i)[1])).collect();
        assert_eq!(preds, vec![0, 0]);
        let (k, dy) = corrective_step(Sample { x: 0.0, y: 2.0, label: 1 }, &s, &ds, &preds);
        assert_eq!(k, 2);
        // target is the midpoint 0, knot at 3: 0.1 * (0 - 3)
        assert!((dy + 0.3).abs() < 1e-12, "{dy}");
    }

    #[test]
    fn step_is_clamped_to_limits() {
        let mut s = flat_state(0, 0.0, LambdaStrategy::None);
        s.y_limits = (-1.0, 0.05);
        let ds = LabeledDataset::new(array![[0.0, 40.0]], vec![1]).unwrap();
        let (_, dy) = corrective_step(Sample { x: 0.0, y: 40.0, label: 1 }, &s, &ds, &[0]);
        assert!((dy - 0.05).abs() < 1e-12);
    }

    #[test]
    fn consistent_data_is_a_fixed_point() {
        let mut s = flat_state(1, 0.0, LambdaStrategy::None);
        let ds = LabeledDataset::new(array![[-3.0, 4.0], [2.0, -4.0], [8.0, 1.0]], vec![1, 0, 1]).unwrap();
        let before = s.knots().clone();
        assert_eq!(train_epoch(&mut s, &ds), 0);
        assert_eq!(s.knots(), &before);
        assert_eq!(s.error_history(), &[0]);
    }

    #[test]
    fn single_error_moves_one_knot() {
        let mut s = flat_state(1, 0.0, LambdaStrategy::None);
        let ds =
            LabeledDataset::new(array![[-3.0, 4.0], [2.0, -4.0], [4.0, 3.0], [8.0, -1.0]], vec![1, 0, 0, 0]).unwrap();
        assert_eq!(train_epoch(&mut s, &ds), 1);
        let changed = s.knots().ys().iter().filter(|&&y| y != 0.0).count();
        assert_eq!(changed, 1);
    }

    #[test]
    fn margin_violation_pushes_boundary_away() {
        let mut s = flat_state(1, 5.0, LambdaStrategy::None);
        let ds = LabeledDataset::new(array![[0.0, 1.0], [0.0, -20.0]], vec![1, 0]).unwrap();
        assert_eq!(train_epoch(&mut s, &ds), 0);
        assert!(s.knots().ys()[2] < 0.0);
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        let three_d = LabeledDataset::new(array![[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]], vec![0, 1]).unwrap();
        assert!(matches!(fit(&three_d, &SmpaConfig::default()), Err(Error::UnsupportedDimension { .. })));
        let one_class = LabeledDataset::new(array![[0.0, 0.0], [1.0, 1.0]], vec![1, 1]).unwrap();
        assert!(matches!(fit(&one_class, &SmpaConfig::default()), Err(Error::InvalidData(_))));
        let ds = LabeledDataset::new(array![[0.0, 0.0], [1.0, 1.0]], vec![0, 1]).unwrap();
        assert!(fit(&ds, &SmpaConfig { m: 1, ..Default::default() }).is_err());
    }

    #[test]
    fn trace_endpoints_and_two_point_trace() {
        let ds = crate::data::make_moons(60, 0.1, 1).unwrap();
        let model = fit(&ds, &SmpaConfig { epochs: 5, ..Default::default() }).unwrap();
        let xs = model.knots().xs().to_vec();
        let two = model.boundary_trace(2).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two[0], (xs[0], model.spline().eval(xs[0])));
        assert_eq!(two[1], (xs[xs.len() - 1], model.spline().eval(xs[xs.len() - 1])));
        assert!(model.boundary_trace(1).is_err());
        assert!(model.predict(&Array2::zeros((1, 3))).is_err());
    }
}
