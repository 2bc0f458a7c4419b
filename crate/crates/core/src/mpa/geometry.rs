use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;

use crate::data::{seeded_rng, LabeledDataset};
use crate::error::{Error, Result};

const INIT_ATTEMPTS: usize = 100;

/// `normal · x = offset`, with `‖normal‖ = 1` and the first nonzero
/// component of `normal` positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub normal: Array1<f64>,
    pub offset: f64,
}

impl Hyperplane {
    pub fn signed_distance(&self, x: ArrayView1<'_, f64>) -> f64 {
        self.normal.dot(&x) - self.offset
    }
}

/// Singular values (descending) and the right singular vector of the
/// smallest one, for the centered point matrix. Callers pass at least as
/// many points as dimensions.
fn centered_svd(points: &Array2<f64>) -> (Vec<f64>, Array1<f64>, Array1<f64>) {
    let (k, d) = points.dim();
    let mean = points.mean_axis(ndarray::Axis(0)).expect("nonempty point set");
    let centered = DMatrix::from_fn(k, d, |i, j| points[[i, j]] - mean[j]);
    let svd = centered.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smallest = *order.last().expect("at least one singular value");
    let normal = Array1::from_iter(v_t.row(smallest).iter().copied());
    (sigma, normal, mean)
}

/// Smallest singular value that must be nonzero for `d` points to span a
/// `(d-1)`-dimensional affine subspace.
fn span_singular_value(sigma: &[f64], d: usize) -> f64 {
    if d < 2 {
        return 0.0;
    }
    sigma.get(d - 2).copied().unwrap_or(0.0)
}

fn canonical_sign(mut normal: Array1<f64>) -> Array1<f64> {
    if let Some(&first) = normal.iter().find(|v| v.abs() > 1e-12) {
        if first < 0.0 {
            normal.mapv_inplace(|v| -v);
        }
    }
    normal
}

/// Hyperplane through `d` affinely independent points in `d` dimensions.
///
/// The normal is the right singular direction of the centered point matrix
/// with the smallest singular value; the offset is `normal · mean`.
pub fn hyperplane_from_points(points: &Array2<f64>) -> Result<Hyperplane> {
    let (k, d) = points.dim();
    if k != d || d < 2 {
        return Err(Error::invalid_arg(format!("need d points in d >= 2 dimensions, got {k} x {d}")));
    }
    let (sigma, normal, mean) = centered_svd(points);
    let scale = sigma[0];
    if !(scale > 0.0) || span_singular_value(&sigma, d) <= 1e-10 * scale {
        return Err(Error::DegenerateGeometry(format!(
            "control points are affinely dependent (singular values {sigma:?})"
        )));
    }
    let normal = canonical_sign(&normal / normal.dot(&normal).sqrt());
    let offset = normal.dot(&mean);
    Ok(Hyperplane { normal, offset })
}

/// Whether `points` are affinely independent relative to `range`.
pub fn affinely_independent(points: &Array2<f64>, range: f64) -> bool {
    let d = points.ncols();
    let (sigma, _, _) = centered_svd(points);
    span_singular_value(&sigma, d) > 1e-8 * range.max(f64::MIN_POSITIVE)
}

fn widest_range(bounds: &[(f64, f64)]) -> f64 {
    bounds.iter().map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
}

/// `d` points drawn uniformly inside `bounds`, redrawn until affinely
/// independent.
pub fn init_random(bounds: &[(f64, f64)], seed: u64) -> Result<Array2<f64>> {
    let d = bounds.len();
    if d < 2 {
        return Err(Error::invalid_arg(format!("random init needs d >= 2, got {d}")));
    }
    if bounds.iter().any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
        return Err(Error::invalid_arg(format!("bounds must be finite and ordered: {bounds:?}")));
    }
    let range = widest_range(bounds);
    let mut rng = seeded_rng(seed);
    for _ in 0..INIT_ATTEMPTS {
        let points = Array2::from_shape_fn((d, d), |(_, j)| {
            let (lo, hi) = bounds[j];
            if lo == hi {
                lo
            } else {
                rng.random_range(lo..=hi)
            }
        });
        if affinely_independent(&points, range) {
            return Ok(points);
        }
    }
    Err(Error::DegenerateInit(format!("no affinely independent draw in {INIT_ATTEMPTS} attempts within {bounds:?}")))
}

/// Orthonormal basis of the complement of unit vector `u`, from the
/// columns of the Householder reflection that maps `e_0` onto `±u`.
fn complement_basis(u: &Array1<f64>) -> Vec<Array1<f64>> {
    let d = u.len();
    let mut v = u.clone();
    v[0] += if u[0] >= 0.0 { 1.0 } else { -1.0 };
    let vv = v.dot(&v);
    (1..d)
        .map(|j| {
            let mut col = Array1::zeros(d);
            col[j] = 1.0;
            let coeff = 2.0 * v[j] / vv;
            col - &(&v * coeff)
        })
        .collect()
}

/// Control points for the plane through the midpoint of the class centroids
/// with normal along `centroid_1 - centroid_0`.
///
/// The first point is the midpoint; the remaining `d - 1` are the midpoint
/// plus orthonormal complement vectors scaled to 10% of the widest feature
/// range.
pub fn init_centroid(train: &LabeledDataset) -> Result<Array2<f64>> {
    train.require_both_classes()?;
    let d = train.n_features();
    if d < 2 {
        return Err(Error::invalid_arg(format!("centroid init needs d >= 2, got {d}")));
    }
    let mut sums = [Array1::<f64>::zeros(d), Array1::<f64>::zeros(d)];
    let counts = train.class_counts();
    for (i, &l) in train.labels().iter().enumerate() {
        sums[l as usize] += &train.row(i);
    }
    let c0 = &sums[0] / counts[0] as f64;
    let c1 = &sums[1] / counts[1] as f64;
    let diff = &c1 - &c0;
    let norm = diff.dot(&diff).sqrt();
    let range = widest_range(&train.bounds());
    if norm <= 1e-12 * range.max(1.0) {
        return Err(Error::DegenerateInit("class centroids coincide".into()));
    }
    let u = diff / norm;
    let mid = (&c0 + &c1) * 0.5;
    let scale = if range > 0.0 { 0.1 * range } else { 1.0 };

    let mut points = Array2::zeros((d, d));
    points.row_mut(0).assign(&mid);
    for (r, b) in complement_basis(&u).into_iter().enumerate() {
        points.row_mut(r + 1).assign(&(&mid + &(b * scale)));
    }
    Ok(points)
}

/// Component-wise clamp of `step` to `[-limit_j, limit_j]`.
pub fn clip_step(step: &Array1<f64>, limits: &[f64]) -> Array1<f64> {
    Array1::from_iter(step.iter().zip(limits).map(|(&s, &l)| s.clamp(-l, l)))
}
