//! Adaptive estimation of how many runs of a stochastic optimizer are needed
//! on one problem instance.
//!
//! The stopping rule ([`stopping`]) collects run results one at a time,
//! filters outliers, and stops as soon as the sample skewness falls inside
//! `[-tau, tau]`. The remaining modules provide the machinery to validate the
//! rule: a seeded Differential Evolution engine ([`de`]), a small BBOB-style
//! problem suite ([`problems`]) and a bootstrap evaluation harness
//! ([`evaluation`]).

pub mod de;
pub mod evaluation;
pub mod problems;
pub mod seed;
pub mod stats;
pub mod stopping;

pub use stats::{OutlierMethod, RunSample};
pub use stopping::{EstimatorConfig, EstimatorState, Status};
