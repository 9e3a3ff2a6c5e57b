//! Descriptive statistics used by the stopping rule and the evaluation harness.
//!
//! Everything here is a pure function of its inputs. Randomised routines take
//! an explicit seed.

mod bootstrap;
mod outliers;

pub use bootstrap::{
    bca_ci, bootstrap_mean_diff_ci, percentile_ci, BootstrapDraws, CiMethod, ConfidenceInterval, DEFAULT_LEVEL,
    DEFAULT_RESAMPLES,
};
pub use outliers::{detect_outliers, OutlierMethod, OutlierReport, MODIFIED_Z_CONSTANT, MODIFIED_Z_CUTOFF};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample has {len} values, need at least {min}")]
    SampleTooSmall { len: usize, min: usize },
    #[error("value at index {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("quantile level {0} is outside [0, 1]")]
    QuantileOutOfRange(f64),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

/// Objective errors from repeated runs of one algorithm on one problem instance,
/// in run order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RunSample(Vec<f64>);

impl RunSample {
    pub fn new(values: Vec<f64>) -> Result<Self, StatsError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(StatsError::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `n` runs (or all of them if `n` exceeds the length).
    pub fn prefix(&self, n: usize) -> RunSample {
        RunSample(self.0[..n.min(self.0.len())].to_vec())
    }

    /// Appends one finite value.
    pub fn push(&mut self, value: f64) -> Result<(), StatsError> {
        if !value.is_finite() {
            return Err(StatsError::NonFinite {
                index: self.0.len(),
                value,
            });
        }
        self.0.push(value);
        Ok(())
    }

    /// The values not flagged in `report`, in their original order.
    pub fn without(&self, report: &OutlierReport) -> RunSample {
        let kept = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| !report.is_flagged(*i))
            .map(|(_, &v)| v)
            .collect();
        RunSample(kept)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for RunSample {
    type Error = StatsError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

impl From<RunSample> for Vec<f64> {
    fn from(sample: RunSample) -> Self {
        sample.0
    }
}

/// Deviations of a sample from its own mean.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredSample {
    values: Vec<f64>,
    mean: f64,
}

impl CenteredSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mean of the original sample that was subtracted.
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

pub fn mean(sample: &RunSample) -> Result<f64, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    Ok(slice_mean(sample.values()))
}

pub fn center(sample: &RunSample) -> Result<CenteredSample, StatsError> {
    let m = mean(sample)?;
    Ok(CenteredSample {
        values: sample.values().iter().map(|x| x - m).collect(),
        mean: m,
    })
}

/// Moment-based sample skewness `g1 = m3 / m2^(3/2)` with `m_k = mean((x - mean)^k)`.
///
/// A sample whose values are all identical has skewness exactly 0.
pub fn skewness(sample: &RunSample) -> Result<f64, StatsError> {
    if sample.len() < 3 {
        return Err(StatsError::SampleTooSmall {
            len: sample.len(),
            min: 3,
        });
    }
    Ok(slice_skewness(sample.values()))
}

/// Linear-interpolation quantile of the sorted sample: with `h = (n - 1) q`,
/// `x[floor(h)] + frac(h) * (x[floor(h) + 1] - x[floor(h)])`.
pub fn quantile(sample: &RunSample, q: f64) -> Result<f64, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample);
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(StatsError::QuantileOutOfRange(q));
    }
    Ok(sorted_quantile(&sorted(sample.values()), q))
}

pub fn median(sample: &RunSample) -> Result<f64, StatsError> {
    quantile(sample, 0.5)
}

pub(crate) fn slice_mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn slice_skewness(values: &[f64]) -> f64 {
    let first = values[0];
    // Exact constancy check: the floating-point mean of identical values can
    // drift by an ulp, which would otherwise yield a spurious +-1.
    if values.iter().all(|&v| v == first) {
        return 0.0;
    }
    let n = values.len() as f64;
    let m = slice_mean(values);
    let (mut m2, mut m3) = (0.0, 0.0);
    for &v in values {
        let d = v - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
    }
    m2 /= n;
    m3 /= n;
    if m2 == 0.0 {
        return 0.0;
    }
    m3 / (m2 * m2.sqrt())
}

pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// `sorted` must be non-empty and ascending; `q` in `[0, 1]`.
pub(crate) fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * q;
    let lo = (h.floor() as usize).min(n - 1);
    let hi = (lo + 1).min(n - 1);
    let frac = h - lo as f64;
    if frac == 0.0 || lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}
