use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use runsize_core::de::{de_run, sample_config_space, DeConfig, Termination};
use runsize_core::evaluation::{
    aggregate_accuracy, evaluate_triplet, savings_by_group, AccuracyTable, EvaluationRecord, GroundTruthSet,
    SavingsReport, TripletKey, GROUND_TRUTH_RUNS,
};
use runsize_core::problems::{make_instance, ProblemInstance};
use runsize_core::seed::derive_seed;
use runsize_core::stopping::StopError;
use runsize_core::{EstimatorConfig, EstimatorState, OutlierMethod, RunSample, Status};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::tables::{self, fmt_f64, RunRow};

pub const RUNS_FILE: &str = "runs.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const RECORDS_FILE: &str = "records.csv";
pub const ACCURACY_FILE: &str = "accuracy.csv";
pub const SAVINGS_FILE: &str = "savings.csv";
pub const SAVINGS_JSON_FILE: &str = "savings.json";

pub fn algorithm_id(index: usize) -> String {
    format!("de-{index:03}")
}

/// Seed of one benchmark run: hash of (master seed, algorithm, triplet, run index).
pub fn run_seed(master: u64, algorithm: &str, key: &TripletKey, run_index: u32) -> u64 {
    derive_seed([
        master.to_string(),
        algorithm.to_string(),
        key.problem_id.clone(),
        key.instance_id.to_string(),
        key.dimension.to_string(),
        run_index.to_string(),
    ])
}

/// Seed of one bootstrap evaluation.
pub fn bootstrap_seed(
    master: u64,
    algorithm: &str,
    key: &TripletKey,
    tau: f64,
    method: OutlierMethod,
    rep: u32,
) -> u64 {
    derive_seed([
        master.to_string(),
        "bootstrap".to_string(),
        algorithm.to_string(),
        key.problem_id.clone(),
        key.instance_id.to_string(),
        key.dimension.to_string(),
        fmt_f64(tau),
        method.to_string(),
        rep.to_string(),
    ])
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmEntry {
    pub algorithm_id: String,
    pub strategy: String,
    pub f: f64,
    pub cr: f64,
    /// Absent means "equal to the dimension".
    pub population_size: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceEntry {
    pub problem_id: String,
    pub instance_id: u32,
    pub dimension: usize,
    pub f_opt: f64,
    pub shift: Vec<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TerminationCounts {
    pub budget_exhausted: u64,
    pub stagnation: u64,
    pub target_reached: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub config_sampling_seed: u64,
    pub run_seed_scheme: &'static str,
    pub algorithms: Vec<AlgorithmEntry>,
    pub instances: Vec<InstanceEntry>,
    pub total_runs: u64,
    pub terminations: TerminationCounts,
}

pub struct BenchmarkOutput {
    pub runs: Vec<RunRow>,
    pub manifest: Manifest,
}

/// Samples DE configurations and runs each one `runs_per_triplet` times on
/// every configured triplet. Output order is canonical and independent of
/// the thread count.
pub fn benchmark(cfg: &ExperimentConfig) -> Result<BenchmarkOutput> {
    cfg.validate()?;
    let config_seed = derive_seed([cfg.master_seed.to_string(), "de-configs".to_string()]);
    let configs: Vec<(String, DeConfig)> = sample_config_space(cfg.de_config_count, config_seed)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (algorithm_id(i), c))
        .collect();

    let mut instances: Vec<(TripletKey, ProblemInstance)> = Vec::new();
    for &dim in &cfg.dimensions {
        for &problem in &cfg.problems {
            for id in 1..=cfg.instances_per_problem {
                let inst = make_instance(problem, id, dim).map_err(|e| CliError::Config(e.to_string()))?;
                let key = TripletKey {
                    problem_id: problem.to_string(),
                    instance_id: id,
                    dimension: dim,
                };
                instances.push((key, inst));
            }
        }
    }
    for (_, c) in &configs {
        for &dim in &cfg.dimensions {
            c.validate(dim).map_err(|e| CliError::Config(e.to_string()))?;
            cfg.budget_for(dim)
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
    }

    let mut jobs = Vec::new();
    for (ci, _) in configs.iter().enumerate() {
        for (ii, _) in instances.iter().enumerate() {
            for run in 1..=cfg.runs_per_triplet {
                jobs.push((ci, ii, run));
            }
        }
    }

    let pool = cfg.thread_pool()?;
    let results: Vec<(RunRow, Termination)> = pool.install(|| {
        jobs.par_iter()
            .map(|&(ci, ii, run)| {
                let (alg, de_cfg) = &configs[ci];
                let (key, inst) = &instances[ii];
                let seed = run_seed(cfg.master_seed, alg, key, run);
                let result = de_run(inst, de_cfg, &cfg.budget_for(key.dimension), seed)
                    .map_err(|e| CliError::Runtime(format!("{alg} on {}: {e}", key.problem_id)))?;
                let row = RunRow {
                    algorithm_id: alg.clone(),
                    problem_id: key.problem_id.clone(),
                    instance_id: key.instance_id,
                    dimension: key.dimension,
                    run_index: run,
                    error: result.best_error,
                };
                Ok((row, result.termination))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut terminations = TerminationCounts::default();
    let mut runs = Vec::with_capacity(results.len());
    for (row, t) in results {
        match t {
            Termination::BudgetExhausted => terminations.budget_exhausted += 1,
            Termination::Stagnation => terminations.stagnation += 1,
            Termination::TargetReached => terminations.target_reached += 1,
        }
        runs.push(row);
    }
    tables::sort_runs(&mut runs);

    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        config_sampling_seed: config_seed,
        run_seed_scheme: "sha256(master_seed|algorithm_id|problem_id|instance_id|dimension|run_index)[0..8] LE, \
                          parts joined by 0x1f",
        algorithms: configs
            .iter()
            .map(|(id, c)| AlgorithmEntry {
                algorithm_id: id.clone(),
                strategy: c.strategy.as_str().to_string(),
                f: c.f,
                cr: c.cr,
                population_size: c.population_size,
            })
            .collect(),
        instances: instances
            .iter()
            .map(|(key, inst)| InstanceEntry {
                problem_id: key.problem_id.clone(),
                instance_id: key.instance_id,
                dimension: key.dimension,
                f_opt: inst.f_opt(),
                shift: inst.shift().to_vec(),
            })
            .collect(),
        total_runs: runs.len() as u64,
        terminations,
    };
    Ok(BenchmarkOutput { runs, manifest })
}

fn create_file(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn open_file(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

pub fn write_benchmark(out_dir: &Path, output: &BenchmarkOutput) -> Result<()> {
    tables::write_runs(create_file(out_dir, RUNS_FILE)?, &output.runs)?;
    let mut w = create_file(out_dir, MANIFEST_FILE)?;
    serde_json::to_writer_pretty(&mut w, &output.manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(out_dir.join(MANIFEST_FILE), e))
}

pub struct EvaluationOutput {
    pub records: Vec<EvaluationRecord>,
    pub accuracy: AccuracyTable,
}

/// Evaluates every (algorithm, triplet) cell of `rows` for each configured
/// tau, outlier method and repetition. The first 50 runs of each cell are
/// the ground truth.
pub fn evaluate(cfg: &ExperimentConfig, rows: &[RunRow]) -> Result<EvaluationOutput> {
    cfg.validate()?;
    if rows.is_empty() {
        return Err(CliError::Data("run data has no rows".into()));
    }
    let mut cells = Vec::new();
    for ((alg, key), runs) in tables::group_runs(rows)? {
        if runs.len() < GROUND_TRUTH_RUNS {
            return Err(CliError::Data(format!(
                "insufficient runs for {alg}/{}/{}/{}: {} < {GROUND_TRUTH_RUNS}",
                key.problem_id,
                key.instance_id,
                key.dimension,
                runs.len()
            )));
        }
        let sample = RunSample::new(runs[..GROUND_TRUTH_RUNS].to_vec()).map_err(|e| CliError::Data(e.to_string()))?;
        let gt = GroundTruthSet::new(alg, key, sample).map_err(|e| CliError::Data(e.to_string()))?;
        cells.push(gt);
    }

    let mut methods = cfg.outlier_methods.clone();
    methods.sort();
    methods.dedup();
    let taus = cfg.sorted_taus();
    let mut jobs = Vec::new();
    for (gi, _) in cells.iter().enumerate() {
        for &tau in &taus {
            for &method in &methods {
                for rep in 0..cfg.repetitions {
                    jobs.push((gi, tau, method, rep));
                }
            }
        }
    }

    let pool = cfg.thread_pool()?;
    let records: Vec<EvaluationRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(gi, tau, method, rep)| {
                let gt = &cells[gi];
                let seed = bootstrap_seed(cfg.master_seed, &gt.algorithm_id, &gt.triplet, tau, method, rep);
                evaluate_triplet(gt, &cfg.estimator(tau, method), cfg.bootstrap_resamples, seed, rep)
                    .map_err(|e| CliError::Runtime(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let accuracy = aggregate_accuracy(&records).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(EvaluationOutput { records, accuracy })
}

pub fn write_evaluation(out_dir: &Path, output: &EvaluationOutput) -> Result<()> {
    tables::write_records(create_file(out_dir, RECORDS_FILE)?, &output.records)?;
    tables::write_accuracy(create_file(out_dir, ACCURACY_FILE)?, &output.accuracy)
}

#[derive(Debug, Clone, Serialize)]
pub struct SavingsRow {
    pub tau: f64,
    pub outlier_method: OutlierMethod,
    #[serde(flatten)]
    pub report: SavingsReport,
}

/// One savings row per (tau, outlier method), sorted.
pub fn report(records: &[EvaluationRecord], runs_per_triplet: u32) -> Result<Vec<SavingsRow>> {
    if records.is_empty() {
        return Err(CliError::Data("records file has no rows".into()));
    }
    let rows = savings_by_group(records, u64::from(runs_per_triplet)).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(rows
        .into_iter()
        .map(|(tau, outlier_method, report)| SavingsRow {
            tau,
            outlier_method,
            report,
        })
        .collect())
}

pub fn write_report(out_dir: &Path, rows: &[SavingsRow]) -> Result<()> {
    let flat: Vec<_> = rows.iter().map(|r| (r.tau, r.outlier_method, r.report)).collect();
    tables::write_savings(create_file(out_dir, SAVINGS_FILE)?, &flat)?;
    let mut w = create_file(out_dir, SAVINGS_JSON_FILE)?;
    serde_json::to_writer_pretty(&mut w, rows).map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(out_dir.join(SAVINGS_JSON_FILE), e))
}

pub fn run_benchmark(cfg: &ExperimentConfig, out_dir: &Path) -> Result<BenchmarkOutput> {
    let output = benchmark(cfg)?;
    write_benchmark(out_dir, &output)?;
    Ok(output)
}

pub fn run_evaluate(cfg: &ExperimentConfig, runs_csv: &Path, out_dir: &Path) -> Result<EvaluationOutput> {
    let rows = tables::read_runs(open_file(runs_csv)?)?;
    let output = evaluate(cfg, &rows)?;
    write_evaluation(out_dir, &output)?;
    Ok(output)
}

pub fn run_report(records_csv: &Path, runs_per_triplet: u32, out_dir: &Path) -> Result<Vec<SavingsRow>> {
    let records = tables::read_records(open_file(records_csv)?)?;
    let rows = report(&records, runs_per_triplet)?;
    write_report(out_dir, &rows)?;
    Ok(rows)
}

/// Feeds values (one per line) to the online rule and writes one decision
/// line per assessment. Blank lines are skipped.
pub fn estimate<R: BufRead, W: Write>(input: R, config: EstimatorConfig, mut out: W) -> Result<Status> {
    let mut state = EstimatorState::new(config).map_err(|e| CliError::Usage(e.to_string()))?;
    let write_err = |e: std::io::Error| CliError::Runtime(format!("cannot write output: {e}"));
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| CliError::Runtime(format!("cannot read input: {e}")))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let value: f64 = text
            .parse()
            .map_err(|_| CliError::Data(format!("line {}: cannot parse '{text}' as a number", i + 1)))?;
        state = state.observe(value).map_err(|e| match e {
            StopError::NonFiniteValue(v) => CliError::Data(format!("line {}: non-finite value {v}", i + 1)),
            other => CliError::Runtime(other.to_string()),
        })?;
        match (state.status(), state.last_assessment()) {
            (Status::Stopped(n), _) => writeln!(out, "STOP n={n}").map_err(write_err)?,
            (Status::Exhausted(n), _) => writeln!(out, "EXHAUSTED n={n}").map_err(write_err)?,
            (Status::Collecting, Some(a)) => writeln!(
                out,
                "CONTINUE skew={:.4} removed={}",
                a.skewness_value, a.outliers_removed
            )
            .map_err(write_err)?,
            (Status::Collecting, None) => {}
        }
        if state.status().is_finished() {
            break;
        }
    }
    let seen = state.observed().len();
    if seen == 0 {
        return Err(CliError::Data("no values on input".into()));
    }
    if seen < config.initial_runs {
        return Err(CliError::Data(format!(
            "input ended after {seen} values; at least {} are needed for a decision",
            config.initial_runs
        )));
    }
    out.flush().map_err(write_err)?;
    Ok(state.status())
}

/// Per-(tau, method) mean of `n` over distinct cells, handy for summaries.
pub fn mean_n_by_group(records: &[EvaluationRecord]) -> BTreeMap<(String, OutlierMethod), f64> {
    type Cells<'a> = BTreeMap<(&'a str, &'a TripletKey), usize>;
    let mut cells: BTreeMap<(String, OutlierMethod), Cells<'_>> = BTreeMap::new();
    for r in records {
        cells
            .entry((fmt_f64(r.tau), r.outlier_method))
            .or_default()
            .entry((&r.algorithm_id, &r.triplet))
            .or_insert(r.n);
    }
    cells
        .into_iter()
        .map(|(k, v)| (k, v.values().sum::<usize>() as f64 / v.len() as f64))
        .collect()
}
