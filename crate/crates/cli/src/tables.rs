//! CSV schemas: run data, evaluation records, accuracy and savings tables.
//!
//! Floats are written with Rust's shortest round-trip formatting. Readers
//! require exactly the documented column set (in any order).

use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::str::FromStr;

use runsize_core::evaluation::{
    AccuracyTable, EvaluationRecord, SavingsReport, TripletKey, VerdictBand, ACCURACY_COLUMNS,
};
use runsize_core::stats::{CiMethod, ConfidenceInterval, DEFAULT_LEVEL};
use runsize_core::OutlierMethod;

use crate::error::{CliError, Result};

pub const RUN_COLUMNS: [&str; 6] = [
    "algorithm_id",
    "problem_id",
    "instance_id",
    "dimension",
    "run_index",
    "error",
];

pub const RECORD_COLUMNS: [&str; 18] = [
    "algorithm_id",
    "problem_id",
    "instance_id",
    "dimension",
    "tau",
    "outlier_method",
    "repetition",
    "bootstrap_seed",
    "n",
    "converged",
    "m_e",
    "m_t",
    "ci_low",
    "ci_high",
    "ci_contains_zero",
    "bca_applied",
    "bca_contains_zero",
    "verdict_band",
];

pub const SAVINGS_COLUMNS: [&str; 10] = [
    "tau",
    "outlier_method",
    "total_runs",
    "estimated_runs",
    "pct_estimated",
    "saved_runs",
    "pct_saved",
    "pct_accurate",
    "expected_saved_runs",
    "pct_expected_saved",
];

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub algorithm_id: String,
    pub problem_id: String,
    pub instance_id: u32,
    pub dimension: usize,
    pub run_index: u32,
    pub error: f64,
}

impl RunRow {
    fn sort_key(&self) -> (&str, &str, u32, usize, u32) {
        (
            &self.algorithm_id,
            &self.problem_id,
            self.instance_id,
            self.dimension,
            self.run_index,
        )
    }
}

/// Sorts into canonical order (algorithm, problem, instance, dimension, run).
pub fn sort_runs(rows: &mut [RunRow]) {
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

fn csv_err(e: csv::Error) -> CliError {
    match e.kind() {
        csv::ErrorKind::Io(_) => CliError::Runtime(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

pub fn write_runs<W: Write>(out: W, rows: &[RunRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RUN_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.algorithm_id.clone(),
            r.problem_id.clone(),
            r.instance_id.to_string(),
            r.dimension.to_string(),
            r.run_index.to_string(),
            fmt_f64(r.error),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Runtime(e.to_string()))
}

/// Column positions of a validated header.
struct Header {
    index: HashMap<String, usize>,
}

impl Header {
    fn check(found: &csv::StringRecord, expected: &[&str], what: &str) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, name) in found.iter().enumerate() {
            let name = name.trim();
            if !expected.contains(&name) {
                return Err(CliError::Schema(format!("{what}: unknown column '{name}'")));
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(CliError::Schema(format!("{what}: duplicate column '{name}'")));
            }
        }
        if let Some(missing) = expected.iter().find(|c| !index.contains_key(**c)) {
            return Err(CliError::Schema(format!("{what}: missing column '{missing}'")));
        }
        Ok(Self { index })
    }
}

/// One data row plus the line it came from, for error messages.
struct Row<'a> {
    header: &'a Header,
    record: &'a csv::StringRecord,
    line: u64,
}

impl Row<'_> {
    fn raw(&self, column: &str) -> &str {
        self.record.get(self.header.index[column]).unwrap_or("").trim()
    }

    fn parse<T: FromStr>(&self, column: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self.raw(column);
        raw.parse().map_err(|e| {
            CliError::Data(format!(
                "line {}: column {column}: cannot parse '{raw}': {e}",
                self.line
            ))
        })
    }

    fn fail(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::Data(format!("line {}: {msg}", self.line))
    }
}

fn for_each_row<R: Read>(
    input: R,
    expected: &[&str],
    what: &str,
    mut f: impl FnMut(&Row<'_>) -> Result<()>,
) -> Result<()> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = Header::check(reader.headers().map_err(csv_err)?, expected, what)?;
    let mut record = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(csv_err(e)),
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != expected.len() {
            return Err(CliError::Data(format!(
                "line {line}: expected {} fields, found {}",
                expected.len(),
                record.len()
            )));
        }
        f(&Row {
            header: &header,
            record: &record,
            line,
        })?;
    }
    Ok(())
}

pub fn read_runs<R: Read>(input: R) -> Result<Vec<RunRow>> {
    let mut rows = Vec::new();
    for_each_row(input, &RUN_COLUMNS, "run data", |row| {
        let r = RunRow {
            algorithm_id: row.raw("algorithm_id").to_string(),
            problem_id: row.raw("problem_id").to_string(),
            instance_id: row.parse("instance_id")?,
            dimension: row.parse("dimension")?,
            run_index: row.parse("run_index")?,
            error: row.parse("error")?,
        };
        if r.algorithm_id.is_empty() || r.problem_id.is_empty() {
            return Err(row.fail("empty algorithm_id or problem_id"));
        }
        if !(r.error.is_finite() && r.error >= 0.0) {
            return Err(row.fail(format!("error must be finite and >= 0, got {}", r.error)));
        }
        rows.push(r);
        Ok(())
    })?;
    Ok(rows)
}

/// Groups run data per (algorithm, triplet), checking that run indices are
/// unique and dense from 1. Values come back ordered by run index.
pub fn group_runs(rows: &[RunRow]) -> Result<BTreeMap<(String, TripletKey), Vec<f64>>> {
    let mut cells: BTreeMap<(String, TripletKey), BTreeMap<u32, f64>> = BTreeMap::new();
    for r in rows {
        let key = TripletKey {
            problem_id: r.problem_id.clone(),
            instance_id: r.instance_id,
            dimension: r.dimension,
        };
        let runs = cells.entry((r.algorithm_id.clone(), key)).or_default();
        if runs.insert(r.run_index, r.error).is_some() {
            return Err(CliError::Data(format!(
                "duplicate run {} for {}/{}/{}/{}",
                r.run_index, r.algorithm_id, r.problem_id, r.instance_id, r.dimension
            )));
        }
    }
    cells
        .into_iter()
        .map(|((alg, key), runs)| {
            let dense = runs.keys().enumerate().all(|(i, &idx)| idx as usize == i + 1);
            if !dense {
                return Err(CliError::Data(format!(
                    "run indices for {alg}/{}/{}/{} are not dense from 1",
                    key.problem_id, key.instance_id, key.dimension
                )));
            }
            Ok(((alg, key), runs.into_values().collect()))
        })
        .collect()
}

pub fn write_records<W: Write>(out: W, records: &[EvaluationRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.algorithm_id.clone(),
            r.triplet.problem_id.clone(),
            r.triplet.instance_id.to_string(),
            r.triplet.dimension.to_string(),
            fmt_f64(r.tau),
            r.outlier_method.to_string(),
            r.repetition.to_string(),
            r.bootstrap_seed.to_string(),
            r.n.to_string(),
            r.converged.to_string(),
            r.m_e.to_string(),
            r.m_t.to_string(),
            fmt_f64(r.ci.low),
            fmt_f64(r.ci.high),
            r.ci_contains_zero.to_string(),
            r.bca_applied().to_string(),
            r.bca_contains_zero.map(|b| b.to_string()).unwrap_or_default(),
            r.verdict_band.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<EvaluationRecord>> {
    let mut records = Vec::new();
    for_each_row(input, &RECORD_COLUMNS, "records", |row| {
        let bca_applied: bool = row.parse("bca_applied")?;
        let bca_contains_zero = match (bca_applied, row.raw("bca_contains_zero")) {
            (false, "") => None,
            (true, _) => Some(row.parse("bca_contains_zero")?),
            (false, other) => {
                return Err(row.fail(format!("bca_contains_zero '{other}' given but bca_applied is false")))
            }
        };
        let method: OutlierMethod = row.parse("outlier_method")?;
        let verdict_band: VerdictBand = row.parse("verdict_band")?;
        let tau: f64 = row.parse("tau")?;
        if !(tau.is_finite() && tau > 0.0) {
            return Err(row.fail(format!("tau must be positive, got {tau}")));
        }
        records.push(EvaluationRecord {
            algorithm_id: row.raw("algorithm_id").to_string(),
            triplet: TripletKey {
                problem_id: row.raw("problem_id").to_string(),
                instance_id: row.parse("instance_id")?,
                dimension: row.parse("dimension")?,
            },
            tau,
            outlier_method: method,
            repetition: row.parse("repetition")?,
            bootstrap_seed: row.parse("bootstrap_seed")?,
            n: row.parse("n")?,
            converged: row.parse("converged")?,
            m_e: row.parse("m_e")?,
            m_t: row.parse("m_t")?,
            ci: ConfidenceInterval {
                low: row.parse("ci_low")?,
                high: row.parse("ci_high")?,
                level: DEFAULT_LEVEL,
                method: CiMethod::Percentile,
            },
            ci_contains_zero: row.parse("ci_contains_zero")?,
            bca_contains_zero,
            verdict_band,
            post_hoc_frequencies: None,
        });
        Ok(())
    })?;
    Ok(records)
}

pub fn accuracy_header() -> Vec<&'static str> {
    let mut h = vec!["tau", "outlier_method"];
    h.extend(ACCURACY_COLUMNS);
    h
}

pub fn write_accuracy<W: Write>(out: W, table: &AccuracyTable) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(accuracy_header()).map_err(csv_err)?;
    for row in &table.rows {
        let mut fields = vec![fmt_f64(row.tau), row.outlier_method.to_string()];
        fields.extend(row.percentages.iter().map(|p| fmt_f64(*p)));
        w.write_record(fields).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn write_savings<W: Write>(out: W, rows: &[(f64, OutlierMethod, SavingsReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAVINGS_COLUMNS).map_err(csv_err)?;
    for (tau, method, s) in rows {
        w.write_record([
            fmt_f64(*tau),
            method.to_string(),
            s.total_runs.to_string(),
            s.estimated_runs.to_string(),
            fmt_f64(s.pct_estimated),
            s.saved_runs.to_string(),
            fmt_f64(s.pct_saved),
            fmt_f64(s.pct_accurate),
            fmt_f64(s.expected_saved_runs),
            fmt_f64(s.pct_expected_saved),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Runtime(e.to_string()))
}
