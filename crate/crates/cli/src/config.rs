//! Experiment configuration, read from TOML and patched by command-line flags.
//!
//! ```toml
//! dimensions = [10]                 # problem dimensions
//! problems = ["sphere", "rastrigin"] # default: all eight
//! instances_per_problem = 5         # instance ids 1..=k
//! de_config_count = 10              # sampled DE configurations
//! runs_per_triplet = 50             # runs per (configuration, problem, instance, dimension)
//! taus = [0.05, 0.10, 0.15, 0.20]   # skewness thresholds
//! outlier_methods = ["iqr", "percentile", "mad"]
//! repetitions = 10                  # bootstrap repetitions per evaluation cell
//! bootstrap_resamples = 1000
//! initial_runs = 5
//! max_runs = 50
//! master_seed = 0
//! threads = 0                       # 0: one per available core
//!
//! [budget]
//! evals_per_dim = 10000             # max evaluations = evals_per_dim * dimension
//! stagnation_iters = 100
//! target_error = 1e-8
//! ```

use std::path::Path;

use runsize_core::de::BudgetSpec;
use runsize_core::evaluation::GROUND_TRUTH_RUNS;
use runsize_core::problems::ProblemId;
use runsize_core::{EstimatorConfig, OutlierMethod};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dimensions: Vec<usize>,
    pub problems: Vec<ProblemId>,
    pub instances_per_problem: u32,
    pub de_config_count: usize,
    pub runs_per_triplet: u32,
    pub taus: Vec<f64>,
    pub outlier_methods: Vec<OutlierMethod>,
    pub repetitions: u32,
    pub bootstrap_resamples: usize,
    pub initial_runs: usize,
    pub max_runs: usize,
    pub master_seed: u64,
    pub threads: usize,
    pub budget: BudgetConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    pub evals_per_dim: u64,
    pub stagnation_iters: u32,
    pub target_error: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            evals_per_dim: BudgetSpec::DEFAULT_EVALS_PER_DIM,
            stagnation_iters: BudgetSpec::DEFAULT_STAGNATION,
            target_error: BudgetSpec::DEFAULT_TARGET,
        }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dimensions: vec![10],
            problems: ProblemId::ALL.to_vec(),
            instances_per_problem: 5,
            de_config_count: 10,
            runs_per_triplet: GROUND_TRUTH_RUNS as u32,
            taus: vec![0.05, 0.10, 0.15, 0.20],
            outlier_methods: OutlierMethod::ALL.to_vec(),
            repetitions: 10,
            bootstrap_resamples: 1000,
            initial_runs: EstimatorConfig::DEFAULT_INITIAL_RUNS,
            max_runs: EstimatorConfig::DEFAULT_MAX_RUNS,
            master_seed: 0,
            threads: 0,
            budget: BudgetConfig::default(),
        }
    }
}

/// Values given on the command line; each one replaces the file's value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub taus: Option<Vec<f64>>,
    pub outlier_methods: Option<Vec<OutlierMethod>>,
    pub max_runs: Option<usize>,
    pub initial_runs: Option<usize>,
    pub bootstrap_resamples: Option<usize>,
    pub repetitions: Option<u32>,
    pub master_seed: Option<u64>,
    pub threads: Option<usize>,
    pub dimensions: Option<Vec<usize>>,
    pub problems: Option<Vec<ProblemId>>,
    pub instances_per_problem: Option<u32>,
    pub de_config_count: Option<usize>,
    pub runs_per_triplet: Option<u32>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Loads `path` if given (defaults otherwise), applies `overrides` and validates.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($field:ident <- $src:ident),* $(,)?) => {
                $(if let Some(v) = &o.$src { self.$field = v.clone(); })*
            };
        }
        set!(
            taus <- taus,
            outlier_methods <- outlier_methods,
            max_runs <- max_runs,
            initial_runs <- initial_runs,
            bootstrap_resamples <- bootstrap_resamples,
            repetitions <- repetitions,
            master_seed <- master_seed,
            threads <- threads,
            dimensions <- dimensions,
            problems <- problems,
            instances_per_problem <- instances_per_problem,
            de_config_count <- de_config_count,
            runs_per_triplet <- runs_per_triplet,
        );
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.dimensions.is_empty() || self.dimensions.iter().any(|&d| d < 2) {
            return bad("dimensions must be a non-empty list of values >= 2".into());
        }
        if self.problems.is_empty() {
            return bad("problems must not be empty".into());
        }
        if self.taus.is_empty() || self.taus.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return bad("taus must be a non-empty list of positive values".into());
        }
        if self.outlier_methods.is_empty() {
            return bad("outlier_methods must not be empty".into());
        }
        for (name, v) in [
            ("instances_per_problem", self.instances_per_problem as u64),
            ("de_config_count", self.de_config_count as u64),
            ("runs_per_triplet", u64::from(self.runs_per_triplet)),
            ("repetitions", u64::from(self.repetitions)),
            ("bootstrap_resamples", self.bootstrap_resamples as u64),
            ("evals_per_dim", self.budget.evals_per_dim),
            ("stagnation_iters", u64::from(self.budget.stagnation_iters)),
        ] {
            if v == 0 {
                return bad(format!("{name} must be positive"));
            }
        }
        if !(self.budget.target_error.is_finite() && self.budget.target_error > 0.0) {
            return bad("budget.target_error must be positive".into());
        }
        if self.max_runs > GROUND_TRUTH_RUNS {
            return bad(format!(
                "max_runs {} exceeds the {GROUND_TRUTH_RUNS} ground-truth runs",
                self.max_runs
            ));
        }
        for tau in &self.taus {
            self.estimator(*tau, self.outlier_methods[0])
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn estimator(&self, tau: f64, method: OutlierMethod) -> EstimatorConfig {
        EstimatorConfig::new(tau, method)
            .with_initial_runs(self.initial_runs)
            .with_max_runs(self.max_runs)
    }

    pub fn budget_for(&self, dimension: usize) -> BudgetSpec {
        BudgetSpec {
            stagnation_iters: self.budget.stagnation_iters,
            target_error: self.budget.target_error,
            ..BudgetSpec::with_evals_per_dim(dimension, self.budget.evals_per_dim)
        }
    }

    /// Sorted, de-duplicated thresholds.
    pub fn sorted_taus(&self) -> Vec<f64> {
        let mut t = self.taus.clone();
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }

    pub fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| CliError::Runtime(format!("cannot start worker pool: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(
            ExperimentConfig::from_toml_str("").unwrap(),
            ExperimentConfig::default()
        );
    }

    #[test]
    fn file_values_and_overrides() {
        let cfg = ExperimentConfig::from_toml_str(
            "taus = [0.2]\noutlier_methods = [\"mad\"]\nproblems = [\"sphere\"]\n[budget]\nevals_per_dim = 2000\n",
        )
        .unwrap();
        assert_eq!(cfg.taus, vec![0.2]);
        assert_eq!(cfg.outlier_methods, vec![OutlierMethod::ModifiedZ]);
        assert_eq!(cfg.budget_for(10).max_evals, 20_000);
        let mut patched = cfg.clone();
        patched.apply(&Overrides {
            taus: Some(vec![0.05, 0.1]),
            master_seed: Some(9),
            ..Default::default()
        });
        assert_eq!(patched.taus, vec![0.05, 0.1]);
        assert_eq!(patched.master_seed, 9);
        assert_eq!(patched.problems, cfg.problems);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(
            ExperimentConfig::from_toml_str("tau = 0.1"),
            Err(CliError::Config(_))
        ));
        assert!(ExperimentConfig::from_toml_str("taus = [0.0]").is_err());
        assert!(ExperimentConfig::from_toml_str("repetitions = 0").is_err());
        assert!(ExperimentConfig::from_toml_str("max_runs = 60").is_err());
        assert!(ExperimentConfig::from_toml_str("initial_runs = 40\nmax_runs = 30").is_err());
        assert!(ExperimentConfig::from_toml_str("problems = [\"nope\"]").is_err());
    }
}
