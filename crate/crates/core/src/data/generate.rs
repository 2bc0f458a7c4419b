use std::f64::consts::PI;

use ndarray::Array2;
use rand_distr::{Distribution, Normal};

use super::{seeded_rng, LabeledDataset};
use crate::error::{Error, Result};

fn linspace(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let step = if count > 1 { (hi - lo) / (count - 1) as f64 } else { 0.0 };
    (0..count).map(move |i| if i + 1 == count && count > 1 { hi } else { lo + step * i as f64 })
}

fn noise_distribution(std: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, std).map_err(|e| Error::invalid_arg(format!("noise std {std}: {e}")))
}

/// Two interleaving half circles.
///
/// Class 0 (`⌈n/2⌉` points) lies on `(cos θ, sin θ)`, class 1 (`⌊n/2⌋`
/// points) on `(1 − cos θ, 0.5 − sin θ)`, with θ evenly spaced over `[0, π]`.
/// Gaussian noise of standard deviation `noise` is added to each coordinate.
pub fn make_moons(n: usize, noise: f64, seed: u64) -> Result<LabeledDataset> {
    if n < 2 {
        return Err(Error::invalid_arg(format!("make_moons needs n >= 2, got {n}")));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::invalid_arg(format!("noise must be a finite non-negative value, got {noise}")));
    }
    let n_upper = n.div_ceil(2);
    let n_lower = n / 2;

    let mut features = Array2::zeros((n, 2));
    let mut labels = Vec::with_capacity(n);
    let upper = linspace(0.0, PI, n_upper).map(|t| (t.cos(), t.sin(), 0));
    let lower = linspace(0.0, PI, n_lower).map(|t| (1.0 - t.cos(), 0.5 - t.sin(), 1));
    for (i, (x, y, label)) in upper.chain(lower).enumerate() {
        features[[i, 0]] = x;
        features[[i, 1]] = y;
        labels.push(label);
    }

    if noise > 0.0 {
        let dist = noise_distribution(noise)?;
        let mut rng = seeded_rng(seed);
        features.iter_mut().for_each(|v| *v += dist.sample(&mut rng));
    }
    LabeledDataset::new(features, labels)
}

/// Two isotropic Gaussian clusters; the label is the center index.
///
/// Class 0 receives `⌈n/2⌉` points and class 1 the rest.
pub fn make_blobs(n: usize, centers: &[Vec<f64>], cluster_std: f64, seed: u64) -> Result<LabeledDataset> {
    if centers.len() != 2 {
        return Err(Error::invalid_arg(format!(
            "make_blobs is binary-only and needs exactly 2 centers, got {}",
            centers.len()
        )));
    }
    if n < 2 {
        return Err(Error::invalid_arg(format!("make_blobs needs n >= 2, got {n}")));
    }
    let d = centers[0].len();
    if d == 0 || centers[1].len() != d {
        return Err(Error::invalid_arg("centers must share a nonzero dimension"));
    }
    if !(cluster_std.is_finite() && cluster_std >= 0.0) {
        return Err(Error::invalid_arg(format!("cluster_std must be finite and non-negative, got {cluster_std}")));
    }
    let dist = noise_distribution(cluster_std)?;
    let mut rng = seeded_rng(seed);

    let n0 = n.div_ceil(2);
    let mut features = Array2::zeros((n, d));
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = usize::from(i >= n0);
        for (j, c) in centers[label].iter().enumerate() {
            features[[i, j]] = c + dist.sample(&mut rng);
        }
        labels.push(label as u8);
    }
    LabeledDataset::new(features, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_noiseless_moons_sit_at_arc_ends() {
        let ds = make_moons(4, 0.0, 123).unwrap();
        let pts: Vec<(f64, f64, u8)> = (0..4).map(|i| (ds.row(i)[0], ds.row(i)[1], ds.labels()[i])).collect();
        let expected = [(1.0, 0.0, 0), (-1.0, 0.0, 0), (0.0, 0.5, 1), (2.0, 0.5, 1)];
        for ((x, y, l), (ex, ey, el)) in pts.iter().zip(expected) {
            assert!((x - ex).abs() < 1e-12 && (y - ey).abs() < 1e-12, "({x},{y}) vs ({ex},{ey})");
            assert_eq!(*l, el);
        }
    }

    #[test]
    fn noiseless_moons_lie_on_unit_circles() {
        let ds = make_moons(101, 0.0, 0).unwrap();
        for (i, &l) in ds.labels().iter().enumerate() {
            let (x, y) = (ds.row(i)[0], ds.row(i)[1]);
            let r = if l == 0 { x.hypot(y) } else { (x - 1.0).hypot(y - 0.5) };
            assert!((r - 1.0).abs() < 1e-12);
        }
        assert_eq!(ds.class_counts(), [51, 50]);
    }

    #[test]
    fn moons_are_balanced_and_seed_only_matters_with_noise() {
        assert_eq!(make_moons(100, 0.1, 7).unwrap().class_counts(), [50, 50]);
        assert_eq!(make_moons(200, 0.0, 1).unwrap(), make_moons(200, 0.0, 2).unwrap());
        assert_ne!(make_moons(200, 0.1, 1).unwrap(), make_moons(200, 0.1, 2).unwrap());
        assert_eq!(make_moons(200, 0.1, 5).unwrap(), make_moons(200, 0.1, 5).unwrap());
        assert!(matches!(make_moons(1, 0.0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn blobs_zero_variance_returns_centers() {
        let ds = make_blobs(2, &[vec![0.0, 0.0], vec![10.0, 10.0]], 0.0, 4).unwrap();
        assert_eq!(ds.features(), &ndarray::array![[0.0, 0.0], [10.0, 10.0]]);
        assert_eq!(ds.labels(), &[0, 1]);
    }

    #[test]
    fn blobs_sample_means_approach_centers() {
        let centers = [vec![0.0, 0.0], vec![5.0, 5.0]];
        let ds = make_blobs(1000, &centers, 1.0, 3).unwrap();
        for class in 0..2u8 {
            let idx: Vec<usize> = (0..ds.n_samples()).filter(|&i| ds.labels()[i] == class).collect();
            for j in 0..2 {
                let mean = idx.iter().map(|&i| ds.row(i)[j]).sum::<f64>() / idx.len() as f64;
                assert!((mean - centers[class as usize][j]).abs() < 0.15, "class {class} dim {j}: {mean}");
            }
        }
    }

    #[test]
    fn blobs_odd_count_and_center_validation() {
        let ds = make_blobs(3, &[vec![0.0, 0.0], vec![1.0, 1.0]], 1.0, 9).unwrap();
        assert_eq!(ds.class_counts(), [2, 1]);
        let three = [vec![0.0], vec![1.0], vec![2.0]];
        assert!(matches!(make_blobs(10, &three, 1.0, 0), Err(Error::InvalidArgument(_))));
    }
}
