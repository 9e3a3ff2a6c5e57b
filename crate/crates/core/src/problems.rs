//! A small BBOB-style suite of eight base functions with seeded instances.
//!
//! Each instance shifts the optimum, applies a random rotation (except for the
//! separable-by-design sphere and linear slope) and adds a random optimum
//! value. Instances are pure functions of `(problem, instance_id, dimension)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::derive_seed;

pub const LOWER_BOUND: f64 = -5.0;
pub const UPPER_BOUND: f64 = 5.0;
const SHIFT_RANGE: f64 = 4.0;
const F_OPT_RANGE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("instance id must be at least 1")]
    BadInstance,
    #[error("point has {got} coordinates, instance has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    Sphere,
    LinearSlope,
    Ellipsoid,
    Rastrigin,
    Rosenbrock,
    AttractiveSector,
    DifferentPowers,
    Schaffers,
}

impl ProblemId {
    pub const ALL: [ProblemId; 8] = [
        ProblemId::Sphere,
        ProblemId::LinearSlope,
        ProblemId::Ellipsoid,
        ProblemId::Rastrigin,
        ProblemId::Rosenbrock,
        ProblemId::AttractiveSector,
        ProblemId::DifferentPowers,
        ProblemId::Schaffers,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Sphere => "sphere",
            ProblemId::LinearSlope => "linear_slope",
            ProblemId::Ellipsoid => "ellipsoid",
            ProblemId::Rastrigin => "rastrigin",
            ProblemId::Rosenbrock => "rosenbrock",
            ProblemId::AttractiveSector => "attractive_sector",
            ProblemId::DifferentPowers => "different_powers",
            ProblemId::Schaffers => "schaffers",
        }
    }

    fn rotated(self) -> bool {
        !matches!(self, ProblemId::Sphere | ProblemId::LinearSlope)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        ProblemId::ALL
            .into_iter()
            .find(|p| p.as_str() == key)
            .ok_or_else(|| ProblemError::UnknownProblem(s.to_string()))
    }
}

/// A (problem, instance, dimension) benchmark target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triplet {
    pub problem: ProblemId,
    pub instance_id: u32,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    problem: ProblemId,
    instance_id: u32,
    dimension: usize,
    shift: Vec<f64>,
    /// Row-major `dimension x dimension`.
    rotation: Vec<f64>,
    f_opt: f64,
}

pub fn make_instance(problem: ProblemId, instance_id: u32, dimension: usize) -> Result<ProblemInstance, ProblemError> {
    if dimension < 2 {
        return Err(ProblemError::BadDimension(dimension));
    }
    if instance_id < 1 {
        return Err(ProblemError::BadInstance);
    }
    let seed = derive_seed([
        "instance",
        problem.as_str(),
        &instance_id.to_string(),
        &dimension.to_string(),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let shift: Vec<f64> = match problem {
        // The linear slope's optimum is a vertex of the search box.
        ProblemId::LinearSlope => (0..dimension)
            .map(|_| if rng.random::<bool>() { UPPER_BOUND } else { LOWER_BOUND })
            .collect(),
        _ => (0..dimension)
            .map(|_| rng.random_range(-SHIFT_RANGE..=SHIFT_RANGE))
            .collect(),
    };
    let rotation = if problem.rotated() {
        random_rotation(dimension, &mut rng)
    } else {
        identity(dimension)
    };
    let f_opt = rng.random_range(-F_OPT_RANGE..=F_OPT_RANGE);

    Ok(ProblemInstance {
        problem,
        instance_id,
        dimension,
        shift,
        rotation,
        f_opt,
    })
}

fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}

/// Q factor of the QR decomposition of a Gaussian matrix, with columns
/// sign-flipped so that `diag(R) > 0`.
fn random_rotation(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Fill row by row so the draw order is independent of storage layout.
    let mut entries = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        entries.push(rng.sample::<f64, _>(StandardNormal));
    }
    let gauss = DMatrix::from_row_slice(d, d, &entries);
    let qr = gauss.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            out.push(q[(i, j)]);
        }
    }
    out
}

impl ProblemInstance {
    /// Builds an instance from explicit parts. `rotation` is row-major.
    pub fn from_parts(
        problem: ProblemId,
        instance_id: u32,
        shift: Vec<f64>,
        rotation: Vec<f64>,
        f_opt: f64,
    ) -> Result<Self, ProblemError> {
        let dimension = shift.len();
        if dimension < 2 {
            return Err(ProblemError::BadDimension(dimension));
        }
        if rotation.len() != dimension * dimension {
            return Err(ProblemError::DimensionMismatch {
                expected: dimension * dimension,
                got: rotation.len(),
            });
        }
        Ok(Self {
            problem,
            instance_id,
            dimension,
            shift,
            rotation,
            f_opt,
        })
    }

    /// Shift 0, identity rotation, optimum value 0.
    pub fn canonical(problem: ProblemId, dimension: usize) -> Result<Self, ProblemError> {
        Self::from_parts(problem, 1, vec![0.0; dimension], identity(dimension), 0.0)
    }

    pub fn problem(&self) -> ProblemId {
        self.problem
    }

    pub fn instance_id(&self) -> u32 {
        self.instance_id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn triplet(&self) -> Triplet {
        Triplet {
            problem: self.problem,
            instance_id: self.instance_id,
            dimension: self.dimension,
        }
    }

    /// Location of the optimum.
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn rotation(&self) -> &[f64] {
        &self.rotation
    }

    pub fn f_opt(&self) -> f64 {
        self.f_opt
    }

    pub fn bounds(&self) -> (f64, f64) {
        (LOWER_BOUND, UPPER_BOUND)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, ProblemError> {
        if x.len() != self.dimension {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        let mut scratch = vec![0.0; 2 * self.dimension];
        Ok(self.evaluate_with(x, &mut scratch))
    }

    /// Allocation-free evaluation; `x.len()` must equal the dimension and
    /// `scratch` must hold at least `2 * dimension` values.
    pub fn evaluate_with(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        let d = self.dimension;
        let (diff, z) = scratch[..2 * d].split_at_mut(d);
        for i in 0..d {
            diff[i] = x[i] - self.shift[i];
        }
        if self.problem.rotated() {
            for (i, zi) in z.iter_mut().enumerate() {
                let row = &self.rotation[i * d..(i + 1) * d];
                *zi = row.iter().zip(diff.iter()).map(|(r, v)| r * v).sum();
            }
        } else {
            z.copy_from_slice(diff);
        }
        let raw = match self.problem {
            ProblemId::Sphere => sphere(z),
            ProblemId::LinearSlope => linear_slope(x, &self.shift),
            ProblemId::Ellipsoid => ellipsoid(z),
            ProblemId::Rastrigin => rastrigin(z),
            ProblemId::Rosenbrock => rosenbrock(z),
            ProblemId::AttractiveSector => attractive_sector(z, &self.shift),
            ProblemId::DifferentPowers => different_powers(z),
            ProblemId::Schaffers => schaffers(z),
        };
        raw + self.f_opt
    }

    /// `max(f - f_opt, 0)`.
    pub fn error_to_optimum(&self, f: f64) -> f64 {
        (f - self.f_opt).max(0.0)
    }
}

fn sphere(z: &[f64]) -> f64 {
    z.iter().map(|v| v * v).sum()
}

fn ellipsoid(z: &[f64]) -> f64 {
    let d = z.len();
    z.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (d - 1) as f64) * v * v)
        .sum()
}

fn rastrigin(z: &[f64]) -> f64 {
    let d = z.len() as f64;
    let cos_sum: f64 = z.iter().map(|v| (2.0 * PI * v).cos()).sum();
    10.0 * (d - cos_sum) + sphere(z)
}

/// Rosenbrock moved so that its minimum sits at `z = 0`.
fn rosenbrock(z: &[f64]) -> f64 {
    z.windows(2)
        .map(|w| {
            let (a, b) = (w[0] + 1.0, w[1] + 1.0);
            100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2)
        })
        .sum()
}

/// Linear function increasing away from the optimal vertex; flat beyond it.
fn linear_slope(x: &[f64], vertex: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .zip(vertex)
        .enumerate()
        .map(|(i, (&xi, &oi))| {
            let s = oi.signum() * 10f64.powf(i as f64 / (d - 1) as f64);
            let z = if oi * xi < UPPER_BOUND * UPPER_BOUND { xi } else { oi };
            5.0 * s.abs() - s * z
        })
        .sum()
}

fn attractive_sector(z: &[f64], shift: &[f64]) -> f64 {
    let s: f64 = z
        .iter()
        .zip(shift)
        .map(|(&zi, &oi)| {
            let w = if zi * oi > 0.0 { 100.0 } else { 1.0 };
            (w * zi).powi(2)
        })
        .sum();
    s.powf(0.9)
}

fn different_powers(z: &[f64]) -> f64 {
    let d = z.len();
    z.iter()
        .enumerate()
        .map(|(i, v)| v.abs().powf(2.0 + 4.0 * i as f64 / (d - 1) as f64))
        .sum::<f64>()
        .sqrt()
}

fn schaffers(z: &[f64]) -> f64 {
    let d = z.len();
    let total: f64 = z
        .windows(2)
        .map(|w| {
            let s = (w[0] * w[0] + w[1] * w[1]).sqrt();
            let root = s.sqrt();
            root + root * (50.0 * s.powf(0.2)).sin().powi(2)
        })
        .sum();
    (total / (d - 1) as f64).powi(2)
}
