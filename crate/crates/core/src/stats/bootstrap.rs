//! Bootstrap confidence intervals for the difference of two means.
//!
//! The two samples are resampled independently. The percentile interval is
//! read off the linear-interpolation quantiles of the resampled differences;
//! the BCa interval adjusts those quantile levels by a bias correction and a
//! jackknife acceleration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{slice_mean, sorted, sorted_quantile, RunSample, StatsError};

pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_LEVEL: f64 = 0.95;
const MIN_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CiMethod {
    Percentile,
    BCa,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub level: f64,
    pub method: CiMethod,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }
}

/// Everything produced by one run of the two-sample bootstrap.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapDraws {
    pub ci: ConfidenceInterval,
    /// `mean(resample of a) - mean(resample of b)`, one per resample, in draw order.
    pub diffs: Vec<f64>,
    pub means_a: Vec<f64>,
    pub means_b: Vec<f64>,
}

impl BootstrapDraws {
    /// Average of the resampled means of `a`.
    pub fn mean_of_means_a(&self) -> f64 {
        slice_mean(&self.means_a)
    }

    /// Average of the resampled means of `b`.
    pub fn mean_of_means_b(&self) -> f64 {
        slice_mean(&self.means_b)
    }
}

/// Draws `resamples` pairs of with-replacement resamples of size
/// `resample_size` from `a` and from `b` and returns the percentile interval
/// of the mean differences. Deterministic in `rng_seed`.
pub fn bootstrap_mean_diff_ci(
    a: &RunSample,
    b: &RunSample,
    resamples: usize,
    resample_size: usize,
    level: f64,
    rng_seed: u64,
) -> Result<BootstrapDraws, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if resamples < MIN_RESAMPLES {
        return Err(StatsError::BadParameters(format!(
            "resamples must be at least {MIN_RESAMPLES}, got {resamples}"
        )));
    }
    if resample_size == 0 {
        return Err(StatsError::BadParameters("resample size must be positive".into()));
    }
    check_level(level)?;

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut means_a = Vec::with_capacity(resamples);
    let mut means_b = Vec::with_capacity(resamples);
    let mut diffs = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let ma = resampled_mean(a.values(), resample_size, &mut rng);
        let mb = resampled_mean(b.values(), resample_size, &mut rng);
        means_a.push(ma);
        means_b.push(mb);
        diffs.push(ma - mb);
    }
    let ci = percentile_ci(&diffs, level)?;
    Ok(BootstrapDraws {
        ci,
        diffs,
        means_a,
        means_b,
    })
}

fn resampled_mean(values: &[f64], size: usize, rng: &mut ChaCha8Rng) -> f64 {
    let n = values.len();
    let mut sum = 0.0;
    for _ in 0..size {
        sum += values[rng.random_range(0..n)];
    }
    sum / size as f64
}

fn check_level(level: f64) -> Result<(), StatsError> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(StatsError::BadParameters(format!(
            "confidence level {level} is not in (0, 1)"
        )))
    }
}

/// Equal-tailed percentile interval over a bootstrap distribution.
pub fn percentile_ci(draws: &[f64], level: f64) -> Result<ConfidenceInterval, StatsError> {
    if draws.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_level(level)?;
    let alpha = 1.0 - level;
    let s = sorted(draws);
    Ok(ConfidenceInterval {
        low: sorted_quantile(&s, alpha / 2.0),
        high: sorted_quantile(&s, 1.0 - alpha / 2.0),
        level,
        method: CiMethod::Percentile,
    })
}

/// Bias-corrected and accelerated interval for `mean(a) - mean(b)` over the
/// bootstrap differences `diffs`.
///
/// `z0 = Phi^-1(#{diffs < observed} / M)`; the acceleration comes from the
/// two-sample jackknife (leave one value out of `a`, then of `b`). If every
/// draw is identical the point interval is returned.
pub fn bca_ci(diffs: &[f64], a: &RunSample, b: &RunSample, level: f64) -> Result<ConfidenceInterval, StatsError> {
    if diffs.is_empty() || a.is_empty() || b.is_empty() {
        return Err(StatsError::EmptySample);
    }
    check_level(level)?;
    let s = sorted(diffs);
    let (min, max) = (s[0], s[s.len() - 1]);
    if min == max {
        return Ok(ConfidenceInterval {
            low: min,
            high: max,
            level,
            method: CiMethod::BCa,
        });
    }

    let observed = slice_mean(a.values()) - slice_mean(b.values());
    let m = diffs.len() as f64;
    let below = diffs.iter().filter(|&&d| d < observed).count() as f64;
    // Keep z0 finite when the observed value sits outside the bootstrap range.
    let p0 = (below / m).clamp(0.5 / m, 1.0 - 0.5 / m);
    let std_normal = Normal::standard();
    let z0 = std_normal.inverse_cdf(p0);
    let accel = jackknife_acceleration(a.values(), b.values());

    let alpha = 1.0 - level;
    let adjust = |tail: f64| {
        let z = std_normal.inverse_cdf(tail);
        let num = z0 + z;
        let denom = 1.0 - accel * num;
        let p = std_normal.cdf(z0 + num / denom);
        if p.is_finite() {
            p.clamp(0.0, 1.0)
        } else {
            tail
        }
    };
    let (mut lo_p, mut hi_p) = (adjust(alpha / 2.0), adjust(1.0 - alpha / 2.0));
    if lo_p > hi_p {
        std::mem::swap(&mut lo_p, &mut hi_p);
    }
    Ok(ConfidenceInterval {
        low: sorted_quantile(&s, lo_p),
        high: sorted_quantile(&s, hi_p),
        level,
        method: CiMethod::BCa,
    })
}

/// Jackknife acceleration of `mean(a) - mean(b)`.
fn jackknife_acceleration(a: &[f64], b: &[f64]) -> f64 {
    let mean_a = slice_mean(a);
    let mean_b = slice_mean(b);
    let mut sum2 = 0.0;
    let mut sum3 = 0.0;
    for (values, sign, other_mean) in [(a, 1.0, mean_b), (b, -1.0, mean_a)] {
        let n = values.len();
        if n < 2 {
            continue;
        }
        let total: f64 = values.iter().sum();
        let leave_one_out: Vec<f64> = values
            .iter()
            .map(|v| {
                let m = (total - v) / (n - 1) as f64;
                if sign > 0.0 {
                    m - other_mean
                } else {
                    other_mean - m
                }
            })
            .collect();
        let jack_mean = slice_mean(&leave_one_out);
        let nf = n as f64;
        for theta in leave_one_out {
            // Empirical influence, scaled by 1/n so both samples share units.
            let u = (nf - 1.0) * (jack_mean - theta) / nf;
            sum2 += u * u;
            sum3 += u * u * u;
        }
    }
    if sum2 == 0.0 {
        0.0
    } else {
        sum3 / (6.0 * sum2.powf(1.5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> RunSample {
        RunSample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn constant_samples_give_point_interval_at_zero() {
        let a = s(&[4.0, 4.0, 4.0]);
        let d = bootstrap_mean_diff_ci(&a, &a, 1000, 50, 0.95, 7).unwrap();
        assert_eq!((d.ci.low, d.ci.high), (0.0, 0.0));
        assert!(d.ci.contains_zero());
    }

    #[test]
    fn constant_separation() {
        let d = bootstrap_mean_diff_ci(&s(&[100.0, 100.0]), &s(&[0.0, 0.0]), 1000, 50, 0.95, 1).unwrap();
        assert_eq!((d.ci.low, d.ci.high), (100.0, 100.0));
        assert!(!d.ci.contains_zero());
    }

    #[test]
    fn parameter_errors() {
        let a = s(&[1.0, 2.0]);
        assert_eq!(
            bootstrap_mean_diff_ci(&s(&[]), &a, 1000, 50, 0.95, 0),
            Err(StatsError::EmptySample)
        );
        assert!(matches!(
            bootstrap_mean_diff_ci(&a, &a, 99, 50, 0.95, 0),
            Err(StatsError::BadParameters(_))
        ));
        assert!(matches!(
            bootstrap_mean_diff_ci(&a, &a, 100, 0, 0.95, 0),
            Err(StatsError::BadParameters(_))
        ));
        assert!(matches!(
            bootstrap_mean_diff_ci(&a, &a, 100, 5, 1.0, 0),
            Err(StatsError::BadParameters(_))
        ));
    }

    #[test]
    fn same_seed_same_draws() {
        let a = s(&[1.0, 5.0, 2.0, 8.0]);
        let b = s(&[3.0, 3.5, 9.0]);
        let x = bootstrap_mean_diff_ci(&a, &b, 500, 50, 0.95, 11).unwrap();
        let y = bootstrap_mean_diff_ci(&a, &b, 500, 50, 0.95, 11).unwrap();
        assert_eq!(x, y);
        let z = bootstrap_mean_diff_ci(&a, &b, 500, 50, 0.95, 12).unwrap();
        assert_ne!(x.diffs, z.diffs);
    }

    #[test]
    fn bca_degenerate_is_point_interval() {
        let ci = bca_ci(&[2.5; 200], &s(&[1.0, 2.0]), &s(&[0.0, 1.0]), 0.95).unwrap();
        assert_eq!((ci.low, ci.high), (2.5, 2.5));
        assert_eq!(ci.method, CiMethod::BCa);
    }

    #[test]
    fn bca_matches_percentile_on_symmetric_draws() {
        // Observed difference 0 sits between the two middle draws; a and b are
        // symmetric so the acceleration vanishes.
        let diffs: Vec<f64> = (0..1000).map(|i| i as f64 - 499.5).collect();
        let a = s(&[-1.0, 0.0, 1.0]);
        let b = s(&[-2.0, 0.0, 2.0]);
        assert_eq!(jackknife_acceleration(a.values(), b.values()), 0.0);
        let bca = bca_ci(&diffs, &a, &b, 0.95).unwrap();
        let pct = percentile_ci(&diffs, 0.95).unwrap();
        assert!((bca.low - pct.low).abs() < 1e-6, "{bca:?} {pct:?}");
        assert!((bca.high - pct.high).abs() < 1e-6, "{bca:?} {pct:?}");
    }
}
