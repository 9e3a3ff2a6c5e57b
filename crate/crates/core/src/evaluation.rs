//! Validation of the stopping rule against 50-run ground-truth samples.
//!
//! For each ground-truth set the rule picks `n` from the run prefixes. The
//! first `n` runs and all 50 runs are cleaned with the same outlier detector,
//! and a bootstrap interval for the difference of their means decides whether
//! the estimate is accurate. Failing intervals get a BCa second look, then a
//! post-hoc relative-error band.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::{
    bca_ci, bootstrap_mean_diff_ci, detect_outliers, CiMethod, ConfidenceInterval, OutlierMethod, RunSample,
    StatsError, DEFAULT_LEVEL,
};
use crate::stopping::{estimate_from_prefixes, EstimatorConfig, StopError};

/// Size of every ground-truth sample and of every bootstrap resample.
pub const GROUND_TRUTH_RUNS: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("invalid ground truth: {0}")]
    BadGroundTruth(String),
    #[error("estimator max_runs {max_runs} exceeds the {available} ground-truth runs")]
    BudgetExceedsGroundTruth { max_runs: usize, available: usize },
    #[error("every value was flagged as an outlier")]
    CleanedSampleEmpty,
    #[error("no records to aggregate")]
    EmptyInput,
    #[error("records mix several (tau, outlier method) groups")]
    MixedGroups,
    #[error(transparent)]
    Stop(#[from] StopError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Problem, instance and dimension of one benchmark target. The problem is a
/// free-form name so that run data from any suite can be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TripletKey {
    pub problem_id: String,
    pub instance_id: u32,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthSet {
    pub triplet: TripletKey,
    pub algorithm_id: String,
    runs: RunSample,
}

impl GroundTruthSet {
    pub fn new(algorithm_id: impl Into<String>, triplet: TripletKey, runs: RunSample) -> Result<Self, EvalError> {
        if runs.len() != GROUND_TRUTH_RUNS {
            return Err(EvalError::BadGroundTruth(format!(
                "expected {GROUND_TRUTH_RUNS} runs, got {}",
                runs.len()
            )));
        }
        if let Some(v) = runs.values().iter().find(|v| **v < 0.0) {
            return Err(EvalError::BadGroundTruth(format!("negative error {v}")));
        }
        Ok(Self {
            triplet,
            algorithm_id: algorithm_id.into(),
            runs,
        })
    }

    pub fn runs(&self) -> &RunSample {
        &self.runs
    }
}

/// Outcome of one evaluation, ordered from best to worst. Post-hoc bands are
/// cumulative when aggregated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VerdictBand {
    /// A bootstrap interval (percentile or BCa) contains zero.
    True,
    Le0_5,
    Le1,
    Le5,
    Le10,
    Le15,
    Le20,
    Fail,
}

impl VerdictBand {
    pub const ALL: [VerdictBand; 8] = [
        VerdictBand::True,
        VerdictBand::Le0_5,
        VerdictBand::Le1,
        VerdictBand::Le5,
        VerdictBand::Le10,
        VerdictBand::Le15,
        VerdictBand::Le20,
        VerdictBand::Fail,
    ];

    /// Post-hoc bands with their relative tolerance in percent.
    pub const POST_HOC: [(VerdictBand, f64); 6] = [
        (VerdictBand::Le0_5, 0.5),
        (VerdictBand::Le1, 1.0),
        (VerdictBand::Le5, 5.0),
        (VerdictBand::Le10, 10.0),
        (VerdictBand::Le15, 15.0),
        (VerdictBand::Le20, 20.0),
    ];

    pub fn rank(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictBand::True => "True",
            VerdictBand::Le0_5 => "Le0_5",
            VerdictBand::Le1 => "Le1",
            VerdictBand::Le5 => "Le5",
            VerdictBand::Le10 => "Le10",
            VerdictBand::Le15 => "Le15",
            VerdictBand::Le20 => "Le20",
            VerdictBand::Fail => "Fail",
        }
    }
}

impl fmt::Display for VerdictBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VerdictBand {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VerdictBand::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| format!("unknown verdict band '{s}'"))
    }
}

/// Smallest post-hoc band with `|estimated - truth| <= pct% * |truth|`.
///
/// A zero `truth` falls back to an absolute tolerance of 1e-12.
pub fn post_hoc_band(estimated_mean: f64, truth_mean: f64) -> VerdictBand {
    let diff = (estimated_mean - truth_mean).abs();
    if truth_mean == 0.0 {
        return if diff <= 1e-12 {
            VerdictBand::Le0_5
        } else {
            VerdictBand::Fail
        };
    }
    VerdictBand::POST_HOC
        .into_iter()
        .find(|(_, pct)| diff <= pct / 100.0 * truth_mean.abs())
        .map_or(VerdictBand::Fail, |(band, _)| band)
}

/// Result of comparing an estimated sample with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct Judgement {
    pub m_e: usize,
    pub m_t: usize,
    pub ci: ConfidenceInterval,
    /// Present when the percentile interval excluded zero.
    pub bca: Option<ConfidenceInterval>,
    pub band: VerdictBand,
    /// Share of paired resamples whose means agree within each post-hoc
    /// tolerance, when the post-hoc stage ran.
    pub post_hoc_frequencies: Option<[f64; 6]>,
}

/// Cleans both samples with `method`, bootstraps the mean difference with
/// `resamples` draws of size 50 and grades the result.
pub fn judge_samples(
    estimated: &RunSample,
    truth: &RunSample,
    method: OutlierMethod,
    resamples: usize,
    bootstrap_seed: u64,
) -> Result<Judgement, EvalError> {
    let est_report = detect_outliers(estimated, method)?;
    let truth_report = detect_outliers(truth, method)?;
    let est_clean = estimated.without(&est_report);
    let truth_clean = truth.without(&truth_report);
    if est_clean.is_empty() || truth_clean.is_empty() {
        return Err(EvalError::CleanedSampleEmpty);
    }

    let draws = bootstrap_mean_diff_ci(
        &est_clean,
        &truth_clean,
        resamples,
        GROUND_TRUTH_RUNS,
        DEFAULT_LEVEL,
        bootstrap_seed,
    )?;
    let mut judgement = Judgement {
        m_e: est_report.flagged_count(),
        m_t: truth_report.flagged_count(),
        ci: draws.ci,
        bca: None,
        band: VerdictBand::True,
        post_hoc_frequencies: None,
    };
    if draws.ci.contains_zero() {
        return Ok(judgement);
    }
    let bca = bca_ci(&draws.diffs, &est_clean, &truth_clean, DEFAULT_LEVEL)?;
    judgement.bca = Some(bca);
    if bca.contains_zero() {
        return Ok(judgement);
    }

    let truth_mean = draws.mean_of_means_b();
    judgement.band = post_hoc_band(draws.mean_of_means_a(), truth_mean);
    let mut freq = [0.0; 6];
    for (slot, (_, pct)) in freq.iter_mut().zip(VerdictBand::POST_HOC) {
        let tol = pct / 100.0 * truth_mean.abs();
        let hits = draws
            .means_a
            .iter()
            .zip(&draws.means_b)
            .filter(|(a, b)| (*a - *b).abs() <= tol)
            .count();
        *slot = hits as f64 / draws.means_a.len() as f64;
    }
    judgement.post_hoc_frequencies = Some(freq);
    Ok(judgement)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub algorithm_id: String,
    pub triplet: TripletKey,
    pub tau: f64,
    pub outlier_method: OutlierMethod,
    pub repetition: u32,
    pub bootstrap_seed: u64,
    pub n: usize,
    pub converged: bool,
    pub m_e: usize,
    pub m_t: usize,
    pub ci: ConfidenceInterval,
    pub ci_contains_zero: bool,
    /// `None` when the BCa stage was not needed.
    pub bca_contains_zero: Option<bool>,
    pub verdict_band: VerdictBand,
    #[serde(skip)]
    pub post_hoc_frequencies: Option<[f64; 6]>,
}

impl EvaluationRecord {
    pub fn bca_applied(&self) -> bool {
        self.bca_contains_zero.is_some()
    }

    pub fn is_accurate(&self) -> bool {
        self.verdict_band == VerdictBand::True
    }
}

/// Runs the stopping rule on the ground truth's prefixes and grades the
/// resulting `n`-run sample against all 50 runs.
pub fn evaluate_triplet(
    gt: &GroundTruthSet,
    est_config: &EstimatorConfig,
    resamples: usize,
    bootstrap_seed: u64,
    repetition: u32,
) -> Result<EvaluationRecord, EvalError> {
    if est_config.max_runs > gt.runs.len() {
        return Err(EvalError::BudgetExceedsGroundTruth {
            max_runs: est_config.max_runs,
            available: gt.runs.len(),
        });
    }
    let estimate = estimate_from_prefixes(&gt.runs, est_config)?;
    let estimated = gt.runs.prefix(estimate.n);
    let mut record = EvaluationRecord {
        algorithm_id: gt.algorithm_id.clone(),
        triplet: gt.triplet.clone(),
        tau: est_config.tau,
        outlier_method: est_config.outlier_method,
        repetition,
        bootstrap_seed,
        n: estimate.n,
        converged: estimate.converged,
        m_e: 0,
        m_t: 0,
        ci: ConfidenceInterval {
            low: f64::NAN,
            high: f64::NAN,
            level: DEFAULT_LEVEL,
            method: CiMethod::Percentile,
        },
        ci_contains_zero: false,
        bca_contains_zero: None,
        verdict_band: VerdictBand::Fail,
        post_hoc_frequencies: None,
    };
    match judge_samples(
        &estimated,
        &gt.runs,
        est_config.outlier_method,
        resamples,
        bootstrap_seed,
    ) {
        Ok(j) => {
            record.m_e = j.m_e;
            record.m_t = j.m_t;
            record.ci = j.ci;
            record.ci_contains_zero = j.ci.contains_zero();
            record.bca_contains_zero = j.bca.map(|ci| ci.contains_zero());
            record.verdict_band = j.band;
            record.post_hoc_frequencies = j.post_hoc_frequencies;
        }
        // Kept as a failed record rather than aborting the whole evaluation.
        Err(EvalError::CleanedSampleEmpty) => {}
        Err(e) => return Err(e),
    }
    Ok(record)
}

/// `tau` with a total order, for grouping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tau(pub f64);

impl Eq for Tau {}

impl PartialOrd for Tau {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tau {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub type GroupKey = (Tau, OutlierMethod);

/// Column labels of the accuracy table: the bootstrap verdict followed by
/// the cumulative post-hoc bands.
pub const ACCURACY_COLUMNS: [&str; 7] = ["True", "<=0.5%", "<=1%", "<=5%", "<=10%", "<=15%", "<=20%"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub tau: f64,
    pub outlier_method: OutlierMethod,
    /// Percentages for `ACCURACY_COLUMNS`, each cumulative over the previous.
    pub percentages: [f64; 7],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AccuracyTable {
    pub rows: Vec<AccuracyRow>,
}

impl AccuracyTable {
    pub fn row(&self, tau: f64, method: OutlierMethod) -> Option<&AccuracyRow> {
        self.rows.iter().find(|r| r.tau == tau && r.outlier_method == method)
    }
}

pub fn group_records(records: &[EvaluationRecord]) -> BTreeMap<GroupKey, Vec<&EvaluationRecord>> {
    let mut groups: BTreeMap<GroupKey, Vec<&EvaluationRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((Tau(r.tau), r.outlier_method)).or_default().push(r);
    }
    groups
}

/// Cumulative band percentages, averaged first over repetitions within each
/// algorithm and then over algorithms.
fn two_stage_percentages(records: &[&EvaluationRecord]) -> [f64; 7] {
    let mut by_alg: BTreeMap<&str, BTreeMap<u32, [usize; 8]>> = BTreeMap::new();
    for r in records {
        let counts = by_alg
            .entry(r.algorithm_id.as_str())
            .or_default()
            .entry(r.repetition)
            .or_insert([0; 8]);
        counts[r.verdict_band.rank()] += 1;
    }
    let mut overall = [0.0; 7];
    for reps in by_alg.values() {
        let mut alg = [0.0; 7];
        for counts in reps.values() {
            let total: usize = counts.iter().sum();
            let mut cumulative = 0;
            for (k, slot) in alg.iter_mut().enumerate() {
                cumulative += counts[k];
                *slot += 100.0 * cumulative as f64 / total as f64;
            }
        }
        for (o, a) in overall.iter_mut().zip(alg) {
            *o += a / reps.len() as f64;
        }
    }
    overall.map(|v| v / by_alg.len() as f64)
}

/// One row per `(tau, outlier method)`, sorted by tau then method.
pub fn aggregate_accuracy(records: &[EvaluationRecord]) -> Result<AccuracyTable, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let rows = group_records(records)
        .into_iter()
        .map(|((tau, method), group)| AccuracyRow {
            tau: tau.0,
            outlier_method: method,
            percentages: two_stage_percentages(&group),
        })
        .collect();
    Ok(AccuracyTable { rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SavingsReport {
    pub total_runs: u64,
    pub estimated_runs: u64,
    pub saved_runs: u64,
    pub pct_estimated: f64,
    pub pct_saved: f64,
    pub pct_accurate: f64,
    pub expected_saved_runs: f64,
    pub pct_expected_saved: f64,
}

impl SavingsReport {
    /// Derives every column from the three primary counts.
    pub fn from_counts(total_runs: u64, estimated_runs: u64, pct_accurate: f64) -> Self {
        let saved_runs = total_runs.saturating_sub(estimated_runs);
        let expected_saved_runs = saved_runs as f64 * pct_accurate / 100.0;
        let pct = |v: f64| {
            if total_runs == 0 {
                0.0
            } else {
                100.0 * v / total_runs as f64
            }
        };
        Self {
            total_runs,
            estimated_runs,
            saved_runs,
            pct_estimated: pct(estimated_runs as f64),
            pct_saved: pct(saved_runs as f64),
            pct_accurate,
            expected_saved_runs,
            pct_expected_saved: pct(expected_saved_runs),
        }
    }
}

/// Run accounting for records of one `(tau, outlier method)` group.
///
/// Every distinct (algorithm, triplet) cell contributes `runs_per_triplet`
/// to the total and its `n` to the estimate, regardless of how many
/// bootstrap repetitions were recorded for it.
pub fn savings_report(records: &[EvaluationRecord], runs_per_triplet: u64) -> Result<SavingsReport, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let first = (Tau(records[0].tau), records[0].outlier_method);
    if records.iter().any(|r| (Tau(r.tau), r.outlier_method) != first) {
        return Err(EvalError::MixedGroups);
    }
    let mut cells: BTreeMap<(&str, &TripletKey), (u32, usize)> = BTreeMap::new();
    for r in records {
        let entry = cells
            .entry((r.algorithm_id.as_str(), &r.triplet))
            .or_insert((r.repetition, r.n));
        if r.repetition < entry.0 {
            *entry = (r.repetition, r.n);
        }
    }
    let total = cells.len() as u64 * runs_per_triplet;
    let estimated: u64 = cells.values().map(|(_, n)| *n as u64).sum();
    let refs: Vec<&EvaluationRecord> = records.iter().collect();
    let pct_accurate = two_stage_percentages(&refs)[0];
    Ok(SavingsReport::from_counts(total, estimated, pct_accurate))
}

/// `savings_report` for every `(tau, outlier method)` group, sorted.
pub fn savings_by_group(
    records: &[EvaluationRecord],
    runs_per_triplet: u64,
) -> Result<Vec<(f64, OutlierMethod, SavingsReport)>, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    group_records(records)
        .into_iter()
        .map(|((tau, method), group)| {
            let owned: Vec<EvaluationRecord> = group.into_iter().cloned().collect();
            Ok((tau.0, method, savings_report(&owned, runs_per_triplet)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key() -> TripletKey {
        TripletKey {
            problem_id: "sphere".into(),
            instance_id: 1,
            dimension: 10,
        }
    }

    fn record(alg: &str, rep: u32, n: usize, band: VerdictBand) -> EvaluationRecord {
        EvaluationRecord {
            algorithm_id: alg.into(),
            triplet: key(),
            tau: 0.05,
            outlier_method: OutlierMethod::ModifiedZ,
            repetition: rep,
            bootstrap_seed: 0,
            n,
            converged: true,
            m_e: 0,
            m_t: 0,
            ci: ConfidenceInterval {
                low: 0.0,
                high: 0.0,
                level: 0.95,
                method: CiMethod::Percentile,
            },
            ci_contains_zero: band == VerdictBand::True,
            bca_contains_zero: None,
            verdict_band: band,
            post_hoc_frequencies: None,
        }
    }

    #[test]
    fn post_hoc_examples() {
        assert_eq!(post_hoc_band(10.0, 10.0), VerdictBand::Le0_5);
        assert_eq!(post_hoc_band(10.0, 10.4), VerdictBand::Le5);
        assert_eq!(post_hoc_band(13.0, 10.0), VerdictBand::Fail);
        assert_eq!(post_hoc_band(0.0, 0.0), VerdictBand::Le0_5);
        assert_eq!(post_hoc_band(1e-6, 0.0), VerdictBand::Fail);
        assert_eq!(post_hoc_band(-10.5, -10.0), VerdictBand::Le5);
    }

    #[test]
    fn constant_ground_truth_is_accurate() {
        let runs = RunSample::new(vec![3.5; 50]).unwrap();
        let gt = GroundTruthSet::new("alg", key(), runs).unwrap();
        let cfg = EstimatorConfig::new(0.05, OutlierMethod::ModifiedZ);
        let r = evaluate_triplet(&gt, &cfg, 1000, 9, 0).unwrap();
        assert_eq!(r.n, 5);
        assert!(r.converged);
        assert_eq!((r.ci.low, r.ci.high), (0.0, 0.0));
        assert_eq!(r.verdict_band, VerdictBand::True);
        assert!(!r.bca_applied());
    }

    #[test]
    fn ground_truth_validation() {
        let short = RunSample::new(vec![1.0; 49]).unwrap();
        assert!(GroundTruthSet::new("a", key(), short).is_err());
        let mut v = vec![1.0; 50];
        v[3] = -0.1;
        assert!(GroundTruthSet::new("a", key(), RunSample::new(v).unwrap()).is_err());
        let gt = GroundTruthSet::new("a", key(), RunSample::new(vec![1.0; 50]).unwrap()).unwrap();
        let cfg = EstimatorConfig::new(0.05, OutlierMethod::Iqr).with_max_runs(60);
        assert!(matches!(
            evaluate_triplet(&gt, &cfg, 1000, 0, 0),
            Err(EvalError::BudgetExceedsGroundTruth {
                max_runs: 60,
                available: 50
            })
        ));
    }

    #[test]
    fn unrepresentative_prefix_fails() {
        // The first five runs are symmetric around 1, so the rule stops at 5;
        // half of the ground truth sits near 100 and no detector removes it.
        let mut v = vec![1.0, 0.99, 1.01, 0.98, 1.02];
        v.extend((0..20).map(|i| 1.0 + 0.001 * i as f64));
        v.extend((0..25).map(|i| 100.0 + 0.01 * i as f64));
        let gt = GroundTruthSet::new("a", key(), RunSample::new(v).unwrap()).unwrap();
        for method in OutlierMethod::ALL {
            let r = evaluate_triplet(&gt, &EstimatorConfig::new(0.05, method), 1000, 3, 0).unwrap();
            assert_eq!(r.n, 5, "{method}");
            assert!(!r.ci_contains_zero);
            assert_eq!(r.bca_contains_zero, Some(false));
            assert_eq!(r.verdict_band, VerdictBand::Fail);
            assert!(r.ci.high < 0.0);
        }
    }

    #[test]
    fn aggregate_examples() {
        let all_true = vec![
            record("a", 0, 5, VerdictBand::True),
            record("b", 0, 7, VerdictBand::True),
        ];
        let t = aggregate_accuracy(&all_true).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].percentages, [100.0; 7]);

        let mixed = vec![
            record("a", 0, 5, VerdictBand::True),
            record("a", 0, 5, VerdictBand::Le5),
        ];
        let p = aggregate_accuracy(&mixed).unwrap().rows[0].percentages;
        assert_eq!(p, [50.0, 50.0, 50.0, 100.0, 100.0, 100.0, 100.0]);

        assert_eq!(aggregate_accuracy(&[]), Err(EvalError::EmptyInput));
    }

    #[test]
    fn aggregate_is_two_stage() {
        // alg a: rep0 100%, rep1 0% -> 50%. alg b: one record True -> 100%.
        // Two-stage mean is 75%, a flat mean over records would be 66.7%.
        let recs = vec![
            record("a", 0, 5, VerdictBand::True),
            record("a", 1, 5, VerdictBand::Fail),
            record("b", 0, 5, VerdictBand::True),
        ];
        let p = aggregate_accuracy(&recs).unwrap().rows[0].percentages;
        assert_eq!(p[0], 75.0);
        assert_eq!(p[6], 75.0);
    }

    #[test]
    fn savings_single_record() {
        let s = savings_report(&[record("a", 0, 20, VerdictBand::True)], 50).unwrap();
        assert_eq!((s.total_runs, s.estimated_runs, s.saved_runs), (50, 20, 30));
        assert_eq!(s.expected_saved_runs, 30.0);
        assert_eq!(s.pct_estimated + s.pct_saved, 100.0);
    }

    #[test]
    fn savings_counts_cells_once_across_repetitions() {
        let recs: Vec<_> = (0..10).map(|rep| record("a", rep, 20, VerdictBand::True)).collect();
        let s = savings_report(&recs, 50).unwrap();
        assert_eq!((s.total_runs, s.estimated_runs), (50, 20));
    }

    #[test]
    fn savings_forced_arithmetic() {
        let s = SavingsReport::from_counts(100, 60, 75.0);
        assert_eq!(s.saved_runs, 40);
        assert_eq!(s.expected_saved_runs, 30.0);
    }

    #[test]
    fn savings_rejects_mixed_groups() {
        let mut other = record("a", 0, 5, VerdictBand::True);
        other.tau = 0.2;
        let recs = vec![record("a", 0, 5, VerdictBand::True), other];
        assert_eq!(savings_report(&recs, 50), Err(EvalError::MixedGroups));
        let groups = savings_by_group(&recs, 50).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].0, 0.05);
        assert_eq!(groups[1].0, 0.2);
    }

    #[test]
    fn band_names_round_trip() {
        for b in VerdictBand::ALL {
            assert_eq!(b.as_str().parse::<VerdictBand>().unwrap(), b);
        }
    }
}
