//! Online run-count estimator.
//!
//! Runs are fed one at a time. Once `initial_runs` values are available, each
//! new value triggers a fresh assessment of the whole sample: outliers are
//! removed with the configured detector, and the skewness of what remains is
//! compared against `[-tau, tau]`. The estimate `n` always counts every run
//! observed, flagged outliers included.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::{self, detect_outliers, OutlierMethod, RunSample, StatsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StopError {
    #[error("invalid estimator config: {0}")]
    BadConfig(String),
    #[error("estimator already finished with {0:?}")]
    AlreadyStopped(Status),
    #[error("run value {0} is not finite")]
    NonFiniteValue(f64),
    #[error("sample has {len} values, need at least {min}")]
    SampleTooSmall { len: usize, min: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    /// Skewness threshold; the sample counts as symmetric when `|skew| <= tau`.
    pub tau: f64,
    pub initial_runs: usize,
    pub max_runs: usize,
    pub outlier_method: OutlierMethod,
    /// Fewest values that must survive outlier removal for the skewness to count.
    pub min_retained: usize,
}

impl EstimatorConfig {
    pub const DEFAULT_INITIAL_RUNS: usize = 5;
    pub const DEFAULT_MAX_RUNS: usize = 50;
    pub const DEFAULT_MIN_RETAINED: usize = 3;

    pub fn new(tau: f64, outlier_method: OutlierMethod) -> Self {
        Self {
            tau,
            initial_runs: Self::DEFAULT_INITIAL_RUNS,
            max_runs: Self::DEFAULT_MAX_RUNS,
            outlier_method,
            min_retained: Self::DEFAULT_MIN_RETAINED,
        }
    }

    pub fn with_max_runs(mut self, max_runs: usize) -> Self {
        self.max_runs = max_runs;
        self
    }

    pub fn with_initial_runs(mut self, initial_runs: usize) -> Self {
        self.initial_runs = initial_runs;
        self
    }

    pub fn validate(&self) -> Result<(), StopError> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(StopError::BadConfig(format!("tau must be positive, got {}", self.tau)));
        }
        if self.initial_runs < 3 {
            return Err(StopError::BadConfig(format!(
                "initial_runs must be at least 3, got {}",
                self.initial_runs
            )));
        }
        if self.max_runs < self.initial_runs {
            return Err(StopError::BadConfig(format!(
                "max_runs ({}) is below initial_runs ({})",
                self.max_runs, self.initial_runs
            )));
        }
        if self.min_retained < 3 {
            return Err(StopError::BadConfig(format!(
                "min_retained must be at least 3, got {}",
                self.min_retained
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Collecting,
    /// The sample became symmetric after `n` runs.
    Stopped(usize),
    /// `max_runs` reached without symmetry.
    Exhausted(usize),
}

impl Status {
    pub fn is_finished(self) -> bool {
        !matches!(self, Status::Collecting)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryAssessment {
    /// `+inf` when too few values survived outlier removal.
    pub skewness_value: f64,
    pub outliers_removed: usize,
    pub retained: usize,
    pub symmetric: bool,
}

impl SymmetryAssessment {
    pub fn computable(&self) -> bool {
        self.skewness_value.is_finite()
    }
}

/// Filters outliers from `sample` and checks `-tau <= skewness <= tau` on
/// what remains.
pub fn assess(sample: &RunSample, config: &EstimatorConfig) -> Result<SymmetryAssessment, StopError> {
    if sample.len() < config.initial_runs {
        return Err(StopError::SampleTooSmall {
            len: sample.len(),
            min: config.initial_runs,
        });
    }
    let report = detect_outliers(sample, config.outlier_method)?;
    let retained = report.retained_count();
    let outliers_removed = report.flagged_count();
    if retained < config.min_retained {
        return Ok(SymmetryAssessment {
            skewness_value: f64::INFINITY,
            outliers_removed,
            retained,
            symmetric: false,
        });
    }
    let skew = stats::skewness(&sample.without(&report))?;
    Ok(SymmetryAssessment {
        skewness_value: skew,
        outliers_removed,
        retained,
        symmetric: -config.tau <= skew && skew <= config.tau,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorState {
    config: EstimatorConfig,
    observed: RunSample,
    status: Status,
    last: Option<SymmetryAssessment>,
}

impl EstimatorState {
    pub fn new(config: EstimatorConfig) -> Result<Self, StopError> {
        config.validate()?;
        Ok(Self {
            config,
            observed: RunSample::default(),
            status: Status::Collecting,
            last: None,
        })
    }

    pub fn config(&self) -> &EstimatorConfig {
        &self.config
    }

    pub fn observed(&self) -> &RunSample {
        &self.observed
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Assessment made on the most recent observation, if one was due.
    pub fn last_assessment(&self) -> Option<&SymmetryAssessment> {
        self.last.as_ref()
    }

    /// Records one more run and returns the updated state.
    pub fn observe(&self, value: f64) -> Result<EstimatorState, StopError> {
        if self.status.is_finished() {
            return Err(StopError::AlreadyStopped(self.status));
        }
        if !value.is_finite() {
            return Err(StopError::NonFiniteValue(value));
        }
        let mut next = self.clone();
        next.observed.push(value)?;
        let p = next.observed.len();
        if p < next.config.initial_runs {
            next.last = None;
            return Ok(next);
        }
        let assessment = assess(&next.observed, &next.config)?;
        next.status = if assessment.symmetric {
            Status::Stopped(p)
        } else if p >= next.config.max_runs {
            Status::Exhausted(p)
        } else {
            Status::Collecting
        };
        next.last = Some(assessment);
        Ok(next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixEstimate {
    pub n: usize,
    /// `false` when the rule hit `max_runs` (or ran out of data) without symmetry.
    pub converged: bool,
}

/// Replays the online rule over the prefixes of `full`.
///
/// If `full` ends before the rule finishes, the estimate is `full.len()`
/// with `converged = false`.
pub fn estimate_from_prefixes(full: &RunSample, config: &EstimatorConfig) -> Result<PrefixEstimate, StopError> {
    if full.len() < config.initial_runs {
        return Err(StopError::SampleTooSmall {
            len: full.len(),
            min: config.initial_runs,
        });
    }
    let mut state = EstimatorState::new(*config)?;
    for &v in full.values() {
        state = state.observe(v)?;
        match state.status() {
            Status::Collecting => {}
            Status::Stopped(n) => return Ok(PrefixEstimate { n, converged: true }),
            Status::Exhausted(n) => return Ok(PrefixEstimate { n, converged: false }),
        }
    }
    Ok(PrefixEstimate {
        n: full.len(),
        converged: false,
    })
}
