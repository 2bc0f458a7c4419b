use movingpoints::eval::{regularized_incomplete_beta, student_t_sf, welch_t_from_samples, welch_t_from_summary};
use proptest::prelude::*;

/// Upper tail of the standard normal via a high-precision erfc series.
fn normal_sf(z: f64) -> f64 {
    // Continued fraction for erfc, accurate far beyond 1e-6 for z > 0.5.
    let x = z / std::f64::consts::SQRT_2;
    let mut f = 0.0;
    for k in (1..200).rev() {
        f = (k as f64 / 2.0) / (x + f);
    }
    0.5 * (-x * x).exp() / (std::f64::consts::PI.sqrt() * (x + f))
}

#[test]
fn cauchy_closed_form_at_one_hundred_points() {
    assert_eq!(student_t_sf(1.0, 1.0), 0.25);
    for i in 0..100 {
        let t = -50.0 + i as f64 * 1.01;
        let exact = 0.5 - t.atan() / std::f64::consts::PI;
        assert!((student_t_sf(t, 1.0) - exact).abs() <= 1e-8, "t={t}");
    }
}

#[test]
fn normal_limit_at_large_df() {
    let oracle = normal_sf(1.96);
    assert!((oracle - 0.024_997_895_148_220_435).abs() < 1e-12);
    let sf = student_t_sf(1.96, 1e6);
    assert!((sf - 0.025).abs() < 1e-3);
    assert!((sf - oracle).abs() < 1e-6, "{sf} vs {oracle}");
}

#[test]
fn incomplete_beta_symmetry_and_uniform_case() {
    for i in 1..20 {
        let x = i as f64 / 20.0;
        assert!((regularized_incomplete_beta(1.0, 1.0, x) - x).abs() < 1e-14);
        let (a, b) = (2.5, 7.0);
        let lhs = regularized_incomplete_beta(a, b, x);
        let rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
        assert!((lhs - rhs).abs() < 1e-13);
    }
}

/// Direct Welch formula written out by hand.
fn welch_direct(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64]| {
        let m = mean(v);
        v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
    };
    let (sa, sb) = (var(a) / a.len() as f64, var(b) / b.len() as f64);
    let t = (mean(a) - mean(b)) / (sa + sb).sqrt();
    let df = (sa + sb).powi(2) / (sa * sa / (a.len() as f64 - 1.0) + sb * sb / (b.len() as f64 - 1.0));
    (t, df)
}

#[test]
fn shifted_integer_samples() {
    let a = [1.0, 2.0, 3.0, 4.0, 5.0];
    let b = [2.0, 3.0, 4.0, 5.0, 6.0];
    let r = welch_t_from_samples(&a, &b).unwrap();
    assert!((r.t_statistic + 1.0).abs() < 1e-12);
    assert!((r.degrees_of_freedom - 8.0).abs() < 1e-12);
    assert_eq!(welch_direct(&a, &b), (r.t_statistic, r.degrees_of_freedom));
    // P(|T_8| > 1) = 0.346593...
    assert!((r.p_value_two_sided - 0.346_593_507_087_713_4).abs() < 1e-9);
}

#[test]
fn summary_statistics_reproduce_published_pairs() {
    let r = welch_t_from_summary(0.9825, 0.01, 5, 0.9725, 0.0094, 5).unwrap();
    assert!((r.t_statistic - 1.4606).abs() <= 0.02, "{r:?}");
    assert!((r.p_value_two_sided - 0.1823).abs() <= 0.01, "{r:?}");
    let r = welch_t_from_summary(0.9690, 0.0150, 25, 0.9660, 0.0192, 25).unwrap();
    assert!((r.t_statistic - 0.6023).abs() <= 0.05 && (r.p_value_two_sided - 0.5498).abs() <= 0.03, "{r:?}");
    let r = welch_t_from_summary(0.9690, 0.0150, 25, 0.9675, 0.0177, 25).unwrap();
    assert!((r.t_statistic - 0.3165).abs() <= 0.05 && (r.p_value_two_sided - 0.7530).abs() <= 0.03, "{r:?}");
    let r = welch_t_from_summary(0.97, 0.02, 5, 0.97, 0.03, 5).unwrap();
    assert_eq!((r.t_statistic, r.p_value_two_sided), (0.0, 1.0));
}

proptest! {
    #[test]
    fn tails_sum_to_one(t in -40.0f64..40.0, df in 0.2f64..500.0) {
        prop_assert!((student_t_sf(t, df) + student_t_sf(-t, df) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn strictly_decreasing_in_t(t in -8.0f64..8.0, dt in 0.01f64..2.0, df in 0.5f64..200.0) {
        prop_assert!(student_t_sf(t + dt, df) < student_t_sf(t, df));
    }

    #[test]
    fn welch_invariances(
        a in prop::collection::vec(-10.0f64..10.0, 2..12),
        b in prop::collection::vec(-10.0f64..10.0, 2..12),
        shift in -50.0f64..50.0,
        scale in prop_oneof![0.1f64..10.0, -10.0f64..-0.1],
    ) {
        let base = welch_t_from_samples(&a, &b).unwrap();
        prop_assume!(base.t_statistic.is_finite() && base.t_statistic.abs() > 1e-9);
        let swapped = welch_t_from_samples(&b, &a).unwrap();
        prop_assert!((swapped.t_statistic + base.t_statistic).abs() < 1e-9);
        prop_assert!((swapped.p_value_two_sided - base.p_value_two_sided).abs() < 1e-12);
        let shifted: Vec<f64> = a.iter().map(|x| x + shift).collect();
        let shifted_b: Vec<f64> = b.iter().map(|x| x + shift).collect();
        let r = welch_t_from_samples(&shifted, &shifted_b).unwrap();
        prop_assert!((r.t_statistic - base.t_statistic).abs() < 1e-6 * base.t_statistic.abs().max(1.0));
        let scaled: Vec<f64> = a.iter().map(|x| x * scale).collect();
        let scaled_b: Vec<f64> = b.iter().map(|x| x * scale).collect();
        let r = welch_t_from_samples(&scaled, &scaled_b).unwrap();
        let expected = base.t_statistic * scale.signum();
        prop_assert!((r.t_statistic - expected).abs() < 1e-6 * expected.abs().max(1.0));
        prop_assert!((r.p_value_two_sided - base.p_value_two_sided).abs() < 1e-9);
    }

    #[test]
    fn p_value_decreasing_in_abs_t(t in 0.0f64..10.0, dt in 0.01f64..3.0, df in 1.0f64..100.0) {
        let p = |t: f64| 2.0 * student_t_sf(t, df);
        prop_assert!(p(t + dt) < p(t));
    }
}
