//! Seeded Differential Evolution.
//!
//! Classic synchronous DE: each generation builds one trial vector per target
//! from the current population, then greedily replaces targets that the trial
//! does not worsen. Parents are drawn distinct from each other and from the
//! target; trial vectors are clamped to the box.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::problems::ProblemInstance;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeError {
    #[error("invalid DE configuration: {0}")]
    BadConfig(String),
    #[error("invalid budget: {0}")]
    BadBudget(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeStrategy {
    Rand1Bin,
    Rand1Exp,
    Rand2Bin,
    Rand2Exp,
    Best1Bin,
    Best1Exp,
    Best2Bin,
    Best2Exp,
    Best3Bin,
    /// Random base plus one random difference pair, with the base redrawn for
    /// every target.
    RandRandBin,
    RandToBest1Bin,
    RandToBest1Exp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Base {
    Random,
    Best,
    Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Crossover {
    Binomial,
    Exponential,
}

impl DeStrategy {
    pub const ALL: [DeStrategy; 12] = [
        DeStrategy::Rand1Bin,
        DeStrategy::Rand1Exp,
        DeStrategy::Rand2Bin,
        DeStrategy::Rand2Exp,
        DeStrategy::Best1Bin,
        DeStrategy::Best1Exp,
        DeStrategy::Best2Bin,
        DeStrategy::Best2Exp,
        DeStrategy::Best3Bin,
        DeStrategy::RandRandBin,
        DeStrategy::RandToBest1Bin,
        DeStrategy::RandToBest1Exp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DeStrategy::Rand1Bin => "rand/1/bin",
            DeStrategy::Rand1Exp => "rand/1/exp",
            DeStrategy::Rand2Bin => "rand/2/bin",
            DeStrategy::Rand2Exp => "rand/2/exp",
            DeStrategy::Best1Bin => "best/1/bin",
            DeStrategy::Best1Exp => "best/1/exp",
            DeStrategy::Best2Bin => "best/2/bin",
            DeStrategy::Best2Exp => "best/2/exp",
            DeStrategy::Best3Bin => "best/3/bin",
            DeStrategy::RandRandBin => "rand/rand/bin",
            DeStrategy::RandToBest1Bin => "randtobest/1/bin",
            DeStrategy::RandToBest1Exp => "randtobest/1/exp",
        }
    }

    /// Number of difference pairs added to the base vector.
    pub fn difference_pairs(self) -> usize {
        use DeStrategy::*;
        match self {
            Rand2Bin | Rand2Exp | Best2Bin | Best2Exp => 2,
            Best3Bin => 3,
            _ => 1,
        }
    }

    /// Smallest population for which the parents can be drawn distinct.
    pub fn min_population(self) -> usize {
        if self.difference_pairs() > 1 {
            7
        } else {
            4
        }
    }

    fn base(self) -> Base {
        use DeStrategy::*;
        match self {
            Best1Bin | Best1Exp | Best2Bin | Best2Exp | Best3Bin => Base::Best,
            RandToBest1Bin | RandToBest1Exp => Base::Target,
            _ => Base::Random,
        }
    }

    fn crossover(self) -> Crossover {
        use DeStrategy::*;
        match self {
            Rand1Exp | Rand2Exp | Best1Exp | Best2Exp | RandToBest1Exp => Crossover::Exponential,
            _ => Crossover::Binomial,
        }
    }
}

impl fmt::Display for DeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DeStrategy {
    type Err = DeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        DeStrategy::ALL
            .into_iter()
            .find(|st| st.as_str() == key || format!("{st:?}").to_ascii_lowercase() == key)
            .ok_or_else(|| DeError::BadConfig(format!("unknown strategy '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeConfig {
    pub strategy: DeStrategy,
    /// Scaling factor, in (0, 1).
    pub f: f64,
    /// Crossover probability, in (0, 1).
    pub cr: f64,
    /// `None` means "equal to the problem dimension".
    pub population_size: Option<usize>,
}

impl DeConfig {
    pub fn new(strategy: DeStrategy, f: f64, cr: f64) -> Self {
        Self {
            strategy,
            f,
            cr,
            population_size: None,
        }
    }

    pub fn resolved_population(&self, dimension: usize) -> usize {
        self.population_size.unwrap_or(dimension)
    }

    pub fn validate(&self, dimension: usize) -> Result<(), DeError> {
        if !(self.f > 0.0 && self.f < 1.0) {
            return Err(DeError::BadConfig(format!("F must lie in (0, 1), got {}", self.f)));
        }
        if !(self.cr > 0.0 && self.cr < 1.0) {
            return Err(DeError::BadConfig(format!("Cr must lie in (0, 1), got {}", self.cr)));
        }
        let np = self.resolved_population(dimension);
        let min = self.strategy.min_population();
        if np < min {
            return Err(DeError::BadConfig(format!(
                "{} needs a population of at least {min}, got {np}",
                self.strategy
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub max_evals: u64,
    pub stagnation_iters: u32,
    pub target_error: f64,
}

impl BudgetSpec {
    pub const DEFAULT_EVALS_PER_DIM: u64 = 10_000;
    pub const DEFAULT_STAGNATION: u32 = 100;
    pub const DEFAULT_TARGET: f64 = 1e-8;

    /// `dimension x 10,000` evaluations, 100 stagnant generations, target 1e-8.
    pub fn for_dimension(dimension: usize) -> Self {
        Self::with_evals_per_dim(dimension, Self::DEFAULT_EVALS_PER_DIM)
    }

    pub fn with_evals_per_dim(dimension: usize, evals_per_dim: u64) -> Self {
        Self {
            max_evals: dimension as u64 * evals_per_dim,
            stagnation_iters: Self::DEFAULT_STAGNATION,
            target_error: Self::DEFAULT_TARGET,
        }
    }

    pub fn validate(&self) -> Result<(), DeError> {
        if self.max_evals == 0 || self.stagnation_iters == 0 || self.target_error.is_nan() || self.target_error <= 0.0 {
            return Err(DeError::BadBudget(format!(
                "all budget fields must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    BudgetExhausted,
    Stagnation,
    TargetReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_error: f64,
    pub evals_used: u64,
    pub termination: Termination,
    pub seed: u64,
    pub generations: u32,
}

/// Per-generation hook for inspecting a run; receives the generation index
/// and the best-so-far error.
pub trait Observer {
    fn generation(&mut self, generation: u32, best_error: f64);
}

impl Observer for () {
    fn generation(&mut self, _: u32, _: f64) {}
}

impl<F: FnMut(u32, f64)> Observer for F {
    fn generation(&mut self, generation: u32, best_error: f64) {
        self(generation, best_error)
    }
}

pub fn de_run(
    instance: &ProblemInstance,
    config: &DeConfig,
    budget: &BudgetSpec,
    seed: u64,
) -> Result<RunResult, DeError> {
    de_run_observed(instance, config, budget, seed, &mut ())
}

pub fn de_run_observed<O: Observer>(
    instance: &ProblemInstance,
    config: &DeConfig,
    budget: &BudgetSpec,
    seed: u64,
    observer: &mut O,
) -> Result<RunResult, DeError> {
    let dim = instance.dimension();
    config.validate(dim)?;
    budget.validate()?;
    let np = config.resolved_population(dim);
    if budget.max_evals < np as u64 {
        return Err(DeError::BadBudget(format!(
            "max_evals {} cannot cover the initial population of {np}",
            budget.max_evals
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = instance.bounds();
    let mut scratch = vec![0.0; 2 * dim];
    let mut evals: u64 = 0;
    let mut best_error = f64::INFINITY;

    let mut pop: Vec<f64> = (0..np * dim).map(|_| rng.random_range(lo..=hi)).collect();
    let mut errors = vec![0.0; np];
    for i in 0..np {
        let f = instance.evaluate_with(&pop[i * dim..(i + 1) * dim], &mut scratch);
        evals += 1;
        errors[i] = instance.error_to_optimum(f);
        best_error = best_error.min(errors[i]);
        if best_error <= budget.target_error {
            return Ok(finish(best_error, evals, Termination::TargetReached, seed, 0));
        }
    }

    let mut next = pop.clone();
    let mut next_errors = errors.clone();
    let mut trial = vec![0.0; dim];
    let mut stagnant: u32 = 0;
    let mut generation: u32 = 0;
    let pairs = config.strategy.difference_pairs();
    let mut parents = [0usize; 7];

    loop {
        generation += 1;
        let best_idx = argmin(&errors);
        let best_before = best_error;
        for i in 0..np {
            if evals >= budget.max_evals {
                return Ok(finish(
                    best_error,
                    evals,
                    Termination::BudgetExhausted,
                    seed,
                    generation,
                ));
            }
            let needed = match config.strategy.base() {
                Base::Random => 1 + 2 * pairs,
                Base::Best | Base::Target => 2 * pairs,
            };
            pick_distinct(&mut rng, np, i, &mut parents[..needed]);
            let member = |k: usize| &pop[k * dim..(k + 1) * dim];
            let (base, diffs) = match config.strategy.base() {
                Base::Random => (member(parents[0]), &parents[1..needed]),
                Base::Best => (member(best_idx), &parents[..needed]),
                Base::Target => (member(i), &parents[..needed]),
            };
            let target = member(i);
            let best = member(best_idx);
            let mutant_at = |j: usize| {
                let mut v = base[j];
                if config.strategy.base() == Base::Target {
                    v += config.f * (best[j] - target[j]);
                }
                for pair in diffs.chunks_exact(2) {
                    v += config.f * (member(pair[0])[j] - member(pair[1])[j]);
                }
                v
            };

            trial.copy_from_slice(target);
            match config.strategy.crossover() {
                Crossover::Binomial => {
                    let j_rand = rng.random_range(0..dim);
                    for (j, slot) in trial.iter_mut().enumerate() {
                        if j == j_rand || rng.random::<f64>() < config.cr {
                            *slot = mutant_at(j);
                        }
                    }
                }
                Crossover::Exponential => {
                    let start = rng.random_range(0..dim);
                    let mut len = 0;
                    loop {
                        trial[(start + len) % dim] = mutant_at((start + len) % dim);
                        len += 1;
                        if len >= dim || rng.random::<f64>() >= config.cr {
                            break;
                        }
                    }
                }
            }
            for v in trial.iter_mut() {
                *v = v.clamp(lo, hi);
            }

            let f = instance.evaluate_with(&trial, &mut scratch);
            evals += 1;
            let err = instance.error_to_optimum(f);
            if err <= errors[i] {
                next[i * dim..(i + 1) * dim].copy_from_slice(&trial);
                next_errors[i] = err;
            } else {
                next[i * dim..(i + 1) * dim].copy_from_slice(target);
                next_errors[i] = errors[i];
            }
            best_error = best_error.min(err);
            if best_error <= budget.target_error {
                observer.generation(generation, best_error);
                return Ok(finish(best_error, evals, Termination::TargetReached, seed, generation));
            }
        }
        std::mem::swap(&mut pop, &mut next);
        std::mem::swap(&mut errors, &mut next_errors);
        observer.generation(generation, best_error);

        if best_error < best_before {
            stagnant = 0;
        } else {
            stagnant += 1;
            if stagnant >= budget.stagnation_iters {
                return Ok(finish(best_error, evals, Termination::Stagnation, seed, generation));
            }
        }
        if evals >= budget.max_evals {
            return Ok(finish(
                best_error,
                evals,
                Termination::BudgetExhausted,
                seed,
                generation,
            ));
        }
    }
}

fn finish(best_error: f64, evals_used: u64, termination: Termination, seed: u64, generations: u32) -> RunResult {
    RunResult {
        best_error,
        evals_used,
        termination,
        seed,
        generations,
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Fills `out` with indices in `0..n`, all distinct and different from `exclude`.
fn pick_distinct(rng: &mut ChaCha8Rng, n: usize, exclude: usize, out: &mut [usize]) {
    for k in 0..out.len() {
        loop {
            let c = rng.random_range(0..n);
            if c != exclude && !out[..k].contains(&c) {
                out[k] = c;
                break;
            }
        }
    }
}

/// Draws `count` configurations: strategy uniform over the twelve, F and Cr
/// uniform on the open interval (0, 1). Population size is left to the
/// problem dimension.
pub fn sample_config_space(count: usize, seed: u64) -> Vec<DeConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let strategy = DeStrategy::ALL[rng.random_range(0..DeStrategy::ALL.len())];
            let f = open_unit(&mut rng);
            let cr = open_unit(&mut rng);
            DeConfig::new(strategy, f, cr)
        })
        .collect()
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = rng.random();
        if v > 0.0 && v < 1.0 {
            return v;
        }
    }
}
