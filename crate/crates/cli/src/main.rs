use std::fs::File;
use std::io::{self, BufReader};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use runsize_cli::commands;
use runsize_cli::{CliError, ExperimentConfig, Overrides, Result};
use runsize_core::problems::ProblemId;
use runsize_core::{EstimatorConfig, OutlierMethod};

/// Estimate how many independent optimizer runs are enough, and check the
/// estimate against a full set of runs.
#[derive(Parser)]
#[command(name = "runsize", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run sampled DE configurations on the problem suite and write runs.csv plus manifest.json.
    Benchmark {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Apply the stopping rule online to values read one per line.
    Estimate {
        /// Input file; standard input when omitted or "-".
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0.05)]
        tau: f64,
        #[arg(long = "outlier-method", default_value = "mad")]
        outlier_method: OutlierMethod,
        #[arg(long = "max-runs", default_value_t = EstimatorConfig::DEFAULT_MAX_RUNS)]
        max_runs: usize,
        #[arg(long = "initial-runs", default_value_t = EstimatorConfig::DEFAULT_INITIAL_RUNS)]
        initial_runs: usize,
    },
    /// Evaluate run data and write records.csv plus accuracy.csv.
    Evaluate {
        /// Run-data CSV (algorithm_id,problem_id,instance_id,dimension,run_index,error).
        runs_csv: PathBuf,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Summarize evaluation records into savings.csv and savings.json.
    Report {
        /// Records CSV written by `evaluate`.
        records_csv: PathBuf,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment configuration; flags below override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long = "outlier-method", value_delimiter = ',')]
    outlier_method: Option<Vec<OutlierMethod>>,
    #[arg(long = "max-runs")]
    max_runs: Option<usize>,
    #[arg(long = "initial-runs")]
    initial_runs: Option<usize>,
    #[arg(long = "bootstrap-resamples")]
    bootstrap_resamples: Option<usize>,
    #[arg(long)]
    repetitions: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every available core.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    problems: Option<Vec<ProblemId>>,
    /// Instances per problem.
    #[arg(long)]
    instances: Option<u32>,
    /// Number of sampled DE configurations.
    #[arg(long)]
    configs: Option<usize>,
    /// Runs per (configuration, triplet).
    #[arg(long)]
    runs: Option<u32>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let overrides = Overrides {
            taus: self.tau.clone(),
            outlier_methods: self.outlier_method.clone(),
            max_runs: self.max_runs,
            initial_runs: self.initial_runs,
            bootstrap_resamples: self.bootstrap_resamples,
            repetitions: self.repetitions,
            master_seed: self.seed,
            threads: self.threads,
            dimensions: self.dims.clone(),
            problems: self.problems.clone(),
            instances_per_problem: self.instances,
            de_config_count: self.configs,
            runs_per_triplet: self.runs,
        };
        ExperimentConfig::resolve(self.config.as_deref(), &overrides)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Benchmark { exp } => {
            let cfg = exp.resolve()?;
            let out = commands::run_benchmark(&cfg, &exp.out)?;
            eprintln!(
                "wrote {} runs to {}",
                out.runs.len(),
                exp.out.join(commands::RUNS_FILE).display()
            );
        }
        Command::Estimate {
            input,
            tau,
            outlier_method,
            max_runs,
            initial_runs,
        } => {
            let cfg = EstimatorConfig::new(tau, outlier_method)
                .with_initial_runs(initial_runs)
                .with_max_runs(max_runs);
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let stdout = io::stdout().lock();
            match input.filter(|p| p.as_os_str() != "-") {
                Some(path) => {
                    let file = File::open(&path).map_err(|e| CliError::Io {
                        path: path.clone(),
                        source: e,
                    })?;
                    commands::estimate(BufReader::new(file), cfg, stdout)?;
                }
                None => {
                    commands::estimate(io::stdin().lock(), cfg, stdout)?;
                }
            }
        }
        Command::Evaluate { runs_csv, exp } => {
            let cfg = exp.resolve()?;
            let out = commands::run_evaluate(&cfg, &runs_csv, &exp.out)?;
            eprintln!(
                "wrote {} records to {}",
                out.records.len(),
                exp.out.join(commands::RECORDS_FILE).display()
            );
        }
        Command::Report { records_csv, exp } => {
            let cfg = exp.resolve()?;
            let rows = commands::run_report(&records_csv, cfg.runs_per_triplet, &exp.out)?;
            eprintln!(
                "wrote {} rows to {}",
                rows.len(),
                exp.out.join(commands::SAVINGS_FILE).display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("runsize: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
