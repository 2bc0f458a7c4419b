use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `z > 0` (Lanczos approximation).
pub fn ln_gamma(z: f64) -> f64 {
    if z < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta function, modified Lentz.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 20_000;
    let guard = |v: f64| if v.abs() < TINY { TINY } else { v };
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / guard(1.0 + aa * d);
        c = guard(1.0 + aa / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `I_x(a, b)` with `y = 1 - x` supplied separately to avoid cancellation.
fn incomplete_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let front = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * y.ln()).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, y) / b
    }
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    incomplete_beta(a, b, x.clamp(0.0, 1.0), 1.0 - x.clamp(0.0, 1.0))
}

/// Upper-tail probability `P(T > t)` of Student's t with `df` degrees of freedom.
pub fn student_t_sf(t: f64, df: f64) -> f64 {
    if t.is_nan() || df.is_nan() || df <= 0.0 {
        return f64::NAN;
    }
    if t.is_infinite() {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    let t2 = t * t;
    let tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
    if t > 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value_two_sided: f64,
}

/// Welch's unequal-variance t-test from sample variances.
fn welch(mean_a: f64, var_a: f64, n_a: usize, mean_b: f64, var_b: f64, n_b: usize) -> TTestResult {
    let (na, nb) = (n_a as f64, n_b as f64);
    let (sa, sb) = (var_a / na, var_b / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        let equal = mean_a == mean_b;
        return TTestResult {
            t_statistic: if equal { 0.0 } else { (mean_a - mean_b).signum() * f64::INFINITY },
            degrees_of_freedom: na + nb - 2.0,
            p_value_two_sided: if equal { 1.0 } else { 0.0 },
        };
    }
    let t = (mean_a - mean_b) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = (2.0 * student_t_sf(t.abs(), df)).min(1.0);
    TTestResult { t_statistic: t, degrees_of_freedom: df, p_value_two_sided: p }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid_arg(format!("each group needs at least 2 observations, got {n}")));
    }
    Ok(())
}

pub fn welch_t_from_samples(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    check_n(a.len())?;
    check_n(b.len())?;
    let (sa, sb) = (RunStats::from_scores(a)?, RunStats::from_scores(b)?);
    Ok(welch(sa.mean, sa.std_sample.powi(2), a.len(), sb.mean, sb.std_sample.powi(2), b.len()))
}

/// Welch's test from reported summaries.
///
/// The standard deviations are taken as population values (`ddof = 0`), the
/// form benchmark tables usually print, and converted to sample variances
/// with `sd² · n / (n - 1)` before testing.
pub fn welch_t_from_summary(
    mean_a: f64,
    sd_a_population: f64,
    n_a: usize,
    mean_b: f64,
    sd_b_population: f64,
    n_b: usize,
) -> Result<TTestResult> {
    check_n(n_a)?;
    check_n(n_b)?;
    if !(sd_a_population >= 0.0 && sd_b_population >= 0.0) {
        return Err(Error::invalid_arg("standard deviations must be non-negative"));
    }
    let var = |s: f64, n: usize| s * s * n as f64 / (n as f64 - 1.0);
    Ok(welch(mean_a, var(sd_a_population, n_a), n_a, mean_b, var(sd_b_population, n_b), n_b))
}

/// Summary of per-run scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub per_run_scores: Vec<f64>,
    pub mean: f64,
    /// `ddof = 1`; zero when there is a single run.
    pub std_sample: f64,
    /// `ddof = 0`.
    pub std_population: f64,
    pub min: f64,
    pub max: f64,
}

impl RunStats {
    pub fn from_scores(scores: &[f64]) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::invalid_arg("no scores to summarize"));
        }
        let n = scores.len() as f64;
        let mean = scores.iter().sum::<f64>() / n;
        let ss: f64 = scores.iter().map(|s| (s - mean).powi(2)).sum();
        Ok(Self {
            per_run_scores: scores.to_vec(),
            mean,
            std_sample: if scores.len() > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 },
            std_population: (ss / n).sqrt(),
            min: scores.iter().copied().fold(f64::INFINITY, f64::min),
            max: scores.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}
