//! One-dimensional interpolation kernels used as decision boundaries.
//!
//! Both kernels produce a piecewise cubic Hermite curve: knot values plus a
//! slope per knot. They differ only in how the slopes are chosen.
//!
//! - Clamped cubic: slopes solve the C2 continuity system with zero slope
//!   at both ends.
//! - PCHIP: Fritsch–Carlson shape-preserving slopes. The curve is monotone
//!   wherever the data is and never leaves `[min(y_i, y_{i+1}), max(...)]`
//!   on any interval.
//!
//! Outside `[xs[0], xs[m-1]]` the curve is extended as a constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest allowed gap between consecutive knot abscissae.
pub const MIN_KNOT_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplineKind {
    ClampedCubic,
    Pchip,
}

impl SplineKind {
    pub fn name(self) -> &'static str {
        match self {
            SplineKind::ClampedCubic => "clamped-cubic",
            SplineKind::Pchip => "pchip",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "clamped-cubic" | "clamped" | "cubic" => Some(SplineKind::ClampedCubic),
            "pchip" => Some(SplineKind::Pchip),
            _ => None,
        }
    }

    pub fn fit(self, knots: &KnotSet) -> PiecewiseCubic {
        match self {
            SplineKind::ClampedCubic => fit_clamped_cubic(knots),
            SplineKind::Pchip => fit_pchip(knots),
        }
    }
}

/// Interpolation nodes with strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnotSet {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl KnotSet {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidKnots(format!("{} xs but {} ys", xs.len(), ys.len())));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidKnots(format!("need at least 2 knots, got {}", xs.len())));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidKnots("knots must be finite".into()));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] - w[0] < MIN_KNOT_GAP) {
            return Err(Error::InvalidKnots(format!(
                "xs must increase by at least {MIN_KNOT_GAP}: xs[{i}] = {}, xs[{}] = {}",
                xs[i],
                i + 1,
                xs[i + 1]
            )));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Replace one knot height. Abscissae never change.
    pub fn set_y(&mut self, i: usize, y: f64) {
        debug_assert!(y.is_finite());
        self.ys[i] = y;
    }

    /// Index of the knot closest in x; ties go to the lower index.
    pub fn nearest(&self, x: f64) -> usize {
        let hi = self.xs.partition_point(|&k| k < x);
        if hi == 0 {
            return 0;
        }
        if hi == self.xs.len() {
            return hi - 1;
        }
        if x - self.xs[hi - 1] <= self.xs[hi] - x {
            hi - 1
        } else {
            hi
        }
    }
}

/// Piecewise cubic in Hermite form: values and slopes at each knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseCubic {
    kind: SplineKind,
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

fn secants(xs: &[f64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta = ys.windows(2).zip(&h).map(|(w, h)| (w[1] - w[0]) / h).collect();
    (h, delta)
}

/// Cubic spline through the knots with zero slope at both ends and
/// continuous second derivative at every interior knot.
pub fn fit_clamped_cubic(knots: &KnotSet) -> PiecewiseCubic {
    let (xs, ys) = (knots.xs(), knots.ys());
    let m = xs.len();
    let mut slopes = vec![0.0; m];
    if m > 2 {
        let (h, delta) = secants(xs, ys);
        // Row i (interior knot i):
        //   h[i] d[i-1] + 2 (h[i-1] + h[i]) d[i] + h[i-1] d[i+1] = 3 (h[i] δ[i-1] + h[i-1] δ[i])
        // with d[0] = d[m-1] = 0. Strictly diagonally dominant, so Thomas is stable.
        let n = m - 2;
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for r in 0..n {
            let i = r + 1;
            sub[r] = h[i];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            sup[r] = h[i - 1];
            rhs[r] = 3.0 * (h[i] * delta[i - 1] + h[i - 1] * delta[i]);
        }
        let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        slopes[1..m - 1].copy_from_slice(&interior);
    }
    PiecewiseCubic { kind: SplineKind::ClampedCubic, xs: xs.to_vec(), ys: ys.to_vec(), slopes }
}

/// Thomas algorithm. `sub[0]` and `sup[n-1]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// One-sided three-point slope at an end, limited to keep the shape.
fn pchip_end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if sign(d) != sign(m0) {
        0.0
    } else if sign(m0) != sign(m1) && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

/// Fritsch–Carlson monotone cubic Hermite interpolant.
pub fn fit_pchip(knots: &KnotSet) -> PiecewiseCubic {
    let (xs, ys) = (knots.xs(), knots.ys());
    let m = xs.len();
    let (h, delta) = secants(xs, ys);
    let mut slopes = vec![0.0; m];
    if m == 2 {
        slopes.fill(delta[0]);
    } else {
        for k in 1..m - 1 {
            let (s0, s1) = (delta[k - 1], delta[k]);
            if sign(s0) * sign(s1) <= 0 {
                // local extremum or flat neighbour
                slopes[k] = 0.0;
            } else {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                slopes[k] = (w1 + w2) / (w1 / s0 + w2 / s1);
            }
        }
        slopes[0] = pchip_end_slope(h[0], h[1], delta[0], delta[1]);
        slopes[m - 1] = pchip_end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
    }
    PiecewiseCubic { kind: SplineKind::Pchip, xs: xs.to_vec(), ys: ys.to_vec(), slopes }
}

impl PiecewiseCubic {
    pub fn kind(&self) -> SplineKind {
        self.kind
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    /// Interval `k` with `xs[k] <= x < xs[k+1]`; the last interval is closed.
    /// `None` outside the knot range.
    fn interval(&self, x: f64) -> Option<usize> {
        let m = self.xs.len();
        if x < self.xs[0] || x > self.xs[m - 1] || x.is_nan() {
            return None;
        }
        Some(self.xs.partition_point(|&k| k <= x).saturating_sub(1).min(m - 2))
    }

    fn local(&self, k: usize, x: f64) -> (f64, f64) {
        let h = self.xs[k + 1] - self.xs[k];
        (h, (x - self.xs[k]) / h)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some(k) = self.interval(x) else {
            return if x < self.xs[0] { self.ys[0] } else { self.ys[self.ys.len() - 1] };
        };
        let (h, t) = self.local(k, x);
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn eval_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }

    /// First derivative; zero outside the knot range.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        let Some(k) = self.interval(x) else { return 0.0 };
        let (h, t) = self.local(k, x);
        let t2 = t * t;
        let dh00 = 6.0 * t2 - 6.0 * t;
        let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
        let dh01 = -6.0 * t2 + 6.0 * t;
        let dh11 = 3.0 * t2 - 2.0 * t;
        (dh00 * self.ys[k] + dh01 * self.ys[k + 1]) / h + dh10 * self.slopes[k] + dh11 * self.slopes[k + 1]
    }

    /// Second derivative of piece `k` at `x` (which may lie on either end of it).
    pub fn piece_second_derivative(&self, k: usize, x: f64) -> f64 {
        let (h, t) = self.local(k, x);
        ((12.0 * t - 6.0) * self.ys[k] + (6.0 - 12.0 * t) * self.ys[k + 1]) / (h * h)
            + ((6.0 * t - 4.0) * self.slopes[k] + (6.0 * t - 2.0) * self.slopes[k + 1]) / h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knots(pts: &[(f64, f64)]) -> KnotSet {
        KnotSet::new(pts.iter().map(|p| p.0).collect(), pts.iter().map(|p| p.1).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_knot_sets() {
        assert!(matches!(KnotSet::new(vec![0.0], vec![1.0]), Err(Error::InvalidKnots(_))));
        assert!(KnotSet::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(KnotSet::new(vec![1.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(KnotSet::new(vec![0.0, 1e-10], vec![1.0, 2.0]).is_err());
        assert!(KnotSet::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn nearest_prefers_lower_index_on_ties() {
        let k = knots(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        assert_eq!(k.nearest(0.5), 0);
        assert_eq!(k.nearest(0.51), 1);
        assert_eq!(k.nearest(-3.0), 0);
        assert_eq!(k.nearest(9.0), 2);
        assert_eq!(k.nearest(1.0), 1);
    }

    #[test]
    fn constant_knots_reproduce_constant() {
        let k = knots(&[(0.0, 3.5), (1.0, 3.5), (2.0, 3.5)]);
        for s in [fit_clamped_cubic(&k), fit_pchip(&k)] {
            for i in 0..=40 {
                let x = -0.5 + i as f64 * 0.075;
                assert!((s.eval(x) - 3.5).abs() < 1e-12);
                assert!(s.eval_derivative(x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_knot_clamped_is_smoothstep() {
        let s = fit_clamped_cubic(&knots(&[(0.0, 0.0), (2.0, 4.0)]));
        assert!((s.eval(1.0) - 2.0).abs() < 1e-12);
        assert!((s.eval(0.5) - 4.0 * (3.0 * 0.0625 - 2.0 * 0.015625)).abs() < 1e-12);
        assert_eq!(s.eval_derivative(0.0), 0.0);
        assert_eq!(s.eval_derivative(2.0), 0.0);
    }

    #[test]
    fn outside_range_is_constant() {
        let s = fit_clamped_cubic(&knots(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]));
        assert_eq!(s.eval(-10.0), 0.0);
        assert_eq!(s.eval(10.0), 0.0);
        assert_eq!(s.eval_derivative(-1.0), 0.0);
        let p = fit_pchip(&knots(&[(0.0, 1.0), (1.0, 2.0), (2.0, 5.0)]));
        assert_eq!(p.eval(-1.0), 1.0);
        assert_eq!(p.eval(3.0), 5.0);
    }

    #[test]
    fn pchip_bump_does_not_overshoot() {
        let s = fit_pchip(&knots(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0), (3.0, 0.0)]));
        for i in 0..=3000 {
            let v = s.eval(i as f64 * 0.001);
            assert!((-1e-9..=1.0 + 1e-9).contains(&v), "{v}");
        }
        // flat middle interval stays flat
        for i in 0..=100 {
            assert!((s.eval(1.0 + i as f64 * 0.01) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pchip_two_knots_is_linear() {
        let s = fit_pchip(&knots(&[(1.0, 1.0), (3.0, 5.0)]));
        assert!((s.eval(2.0) - 3.0).abs() < 1e-12);
        assert!((s.eval_derivative(1.5) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn clamped_is_second_order_continuous() {
        let s = fit_clamped_cubic(&knots(&[(0.0, 1.0), (0.7, -2.0), (1.5, 3.0), (4.0, 0.5), (4.2, 1.0)]));
        for k in 1..4 {
            let left = s.piece_second_derivative(k - 1, s.xs()[k]);
            let right = s.piece_second_derivative(k, s.xs()[k]);
            assert!((left - right).abs() < 1e-9, "knot {k}: {left} vs {right}");
        }
    }
}
