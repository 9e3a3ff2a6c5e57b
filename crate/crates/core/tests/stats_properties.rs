use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp, StandardNormal};

use runsize_core::stats::{
    bca_ci, bootstrap_mean_diff_ci, center, detect_outliers, median, percentile_ci, skewness, OutlierMethod, RunSample,
};

fn sample(v: Vec<f64>) -> RunSample {
    RunSample::new(v).unwrap()
}

/// Direct two-pass central moments, written out longhand.
fn oracle_skewness(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mut total = 0.0;
    for v in x {
        total += v;
    }
    let mean = total / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    for v in x {
        m2 += (v - mean).powi(2);
        m3 += (v - mean).powi(3);
    }
    m2 /= n;
    m3 /= n;
    if m2 == 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

#[test]
fn skewness_matches_direct_moments_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let len = rng.random_range(5..=50);
        let v: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..100.0)).collect();
        let got = skewness(&sample(v.clone())).unwrap();
        let want = oracle_skewness(&v);
        assert!((got - want).abs() <= 1e-12, "{got} vs {want} on {v:?}");
    }
}

fn finite_vec(min_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1e3f64..1e3, min_len..40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn skewness_affine_sign_rule(v in finite_vec(3), a in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0], b in -1e3f64..1e3) {
        let base = skewness(&sample(v.clone())).unwrap();
        prop_assume!(v.iter().any(|x| *x != v[0]));
        let moved: Vec<f64> = v.iter().map(|x| a * x + b).collect();
        let got = skewness(&sample(moved)).unwrap();
        prop_assert!((got - a.signum() * base).abs() <= 1e-9, "{got} vs {}", a.signum() * base);
    }

    #[test]
    fn mirrored_samples_have_zero_skewness(half in prop::collection::vec(0.0f64..1e3, 1..25), c in -1e3f64..1e3) {
        let mut v: Vec<f64> = half.iter().map(|h| c + h).collect();
        v.extend(half.iter().map(|h| c - h));
        v.push(c);
        prop_assert!(skewness(&sample(v)).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn centered_sample_sums_to_zero(v in finite_vec(1)) {
        let c = center(&sample(v)).unwrap();
        let max_abs = c.values().iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let total: f64 = c.values().iter().sum();
        prop_assert!(total.abs() <= 1e-9 * max_abs);
    }

    #[test]
    fn outlier_flags_are_positive_affine_equivariant(v in finite_vec(3), a in 0.01f64..100.0, b in -1e3f64..1e3) {
        let moved: Vec<f64> = v.iter().map(|x| a * x + b).collect();
        for m in OutlierMethod::ALL {
            let before = detect_outliers(&sample(v.clone()), m).unwrap();
            let after = detect_outliers(&sample(moved.clone()), m).unwrap();
            prop_assert_eq!(before.flagged_indices(), after.flagged_indices(), "{}", m);
        }
    }

    #[test]
    fn modified_z_never_flags_the_median(v in finite_vec(3)) {
        let s = sample(v.clone());
        let med = median(&s).unwrap();
        let report = detect_outliers(&s, OutlierMethod::ModifiedZ).unwrap();
        for (i, x) in v.iter().enumerate() {
            if *x == med {
                prop_assert!(!report.is_flagged(i));
            }
        }
        prop_assert_eq!(report.retained_count() + report.flagged_count(), v.len());
    }

    #[test]
    fn bootstrap_is_deterministic_and_ordered(a in finite_vec(1), b in finite_vec(1), seed in any::<u64>()) {
        let (sa, sb) = (sample(a), sample(b));
        let x = bootstrap_mean_diff_ci(&sa, &sb, 200, 50, 0.95, seed).unwrap();
        let y = bootstrap_mean_diff_ci(&sa, &sb, 200, 50, 0.95, seed).unwrap();
        prop_assert_eq!(x.ci.low.to_bits(), y.ci.low.to_bits());
        prop_assert_eq!(x.ci.high.to_bits(), y.ci.high.to_bits());
        prop_assert!(x.ci.low <= x.ci.high);
        let bca = bca_ci(&x.diffs, &sa, &sb, 0.95).unwrap();
        let lo = x.diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = x.diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= bca.low && bca.low <= bca.high && bca.high <= hi);
    }
}

#[test]
fn bootstrap_of_identical_normal_samples_covers_zero() {
    let mut covered = 0;
    for trial in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + trial);
        let v: Vec<f64> = (0..50).map(|_| rng.sample(StandardNormal)).collect();
        let s = sample(v);
        let d = bootstrap_mean_diff_ci(&s, &s, 1000, 50, 0.95, trial).unwrap();
        if d.ci.contains_zero() {
            covered += 1;
        }
    }
    assert!(covered >= 180, "covered {covered}/200");
}

// Textbook BCa, coded from the closed forms: z0 from the share of draws below
// the observed difference, acceleration from the sample deviations.
fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

// Numerical Recipes erfc (Chebyshev fit, relative error < 1.2e-7).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let r = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398 + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277)))))))))
            .exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}

fn phi_inv(p: f64) -> f64 {
    // Bisection on phi; plenty accurate for a test oracle.
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < p {
            lo = mid
        } else {
            hi = mid
        }
    }
    0.5 * (lo + hi)
}

fn lerp_quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let i = h.floor() as usize;
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[i] + (h - i as f64) * (sorted[i + 1] - sorted[i])
}

fn textbook_bca(diffs: &[f64], a: &[f64], b: &[f64], level: f64) -> (f64, f64) {
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let (ma, mb) = (mean(a), mean(b));
    let observed = ma - mb;
    let below = diffs.iter().filter(|d| **d < observed).count() as f64 / diffs.len() as f64;
    let z0 = phi_inv(below);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let num =
        a.iter().map(|x| ((x - ma) / na).powi(3)).sum::<f64>() - b.iter().map(|x| ((x - mb) / nb).powi(3)).sum::<f64>();
    let den =
        a.iter().map(|x| ((x - ma) / na).powi(2)).sum::<f64>() + b.iter().map(|x| ((x - mb) / nb).powi(2)).sum::<f64>();
    let acc = num / (6.0 * den.powf(1.5));
    let alpha = 1.0 - level;
    let adj = |z: f64| phi(z0 + (z0 + z) / (1.0 - acc * (z0 + z)));
    let mut s = diffs.to_vec();
    s.sort_by(f64::total_cmp);
    (
        lerp_quantile(&s, adj(phi_inv(alpha / 2.0))),
        lerp_quantile(&s, adj(phi_inv(1.0 - alpha / 2.0))),
    )
}

#[test]
fn bca_agrees_with_textbook_formulas_on_skewed_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let exp = Exp::new(1.0).unwrap();
    let a: Vec<f64> = (0..30).map(|_| rng.sample(exp)).collect();
    let b: Vec<f64> = (0..40).map(|_| 0.5 * rng.sample(exp)).collect();
    let diffs: Vec<f64> = (0..2000).map(|_| rng.sample(exp) * 0.3).collect();

    let got = bca_ci(&diffs, &sample(a.clone()), &sample(b.clone()), 0.95).unwrap();
    let (lo, hi) = textbook_bca(&diffs, &a, &b, 0.95);
    let range = 1e-4;
    assert!((got.low - lo).abs() < range, "{} vs {lo}", got.low);
    assert!((got.high - hi).abs() < range, "{} vs {hi}", got.high);

    let pct = percentile_ci(&diffs, 0.95).unwrap();
    assert!(got.low != pct.low && got.high != pct.high);
    let min = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(min <= got.low && got.high <= max);
}
