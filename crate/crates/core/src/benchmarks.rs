//! The classical 23-function benchmark suite.
//!
//! F1-F7 are unimodal, F8-F13 multimodal (both in 30 dimensions), F14-F23
//! fixed-dimension multimodal. Formulas are the standard textbook
//! definitions; F7 adds uniform `[0, 1)` noise drawn from the caller's
//! generator.

use crate::optimizer::{Objective, ObjectiveError};
use crate::space::SearchSpace;
use crate::RunRng;
use rand::Rng;
use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchmarkError {
    #[error("unknown benchmark function '{0}' (expected F1..F23)")]
    UnknownId(String),
    #[error("{id} takes {expected} variables, got {got}")]
    Dimension { id: FunctionId, expected: usize, got: usize },
}

/// Identifier F1..F23.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionId(u8);

impl FunctionId {
    pub const COUNT: u8 = 23;

    pub fn new(n: u8) -> Result<Self, BenchmarkError> {
        if (1..=Self::COUNT).contains(&n) {
            Ok(Self(n))
        } else {
            Err(BenchmarkError::UnknownId(format!("F{n}")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = FunctionId> {
        (1..=Self::COUNT).map(FunctionId)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.0)
    }
}

impl FromStr for FunctionId {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        t.strip_prefix(['F', 'f'])
            .and_then(|n| n.parse::<u8>().ok())
            .and_then(|n| FunctionId::new(n).ok())
            .ok_or_else(|| BenchmarkError::UnknownId(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Unimodal,
    Multimodal,
    FixedDimensionMultimodal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkDescriptor {
    pub id: FunctionId,
    pub name: &'static str,
    pub category: Category,
    /// Per-dimension search interval.
    pub range: (f64, f64),
    pub dims: usize,
    /// Listed global minimum value.
    pub global_optimum: f64,
}

impl BenchmarkDescriptor {
    pub fn search_space(&self) -> SearchSpace {
        SearchSpace::uniform(self.dims, self.range.0, self.range.1).expect("table ranges are valid")
    }
}

const SCHWEFEL_PER_DIM: f64 = -418.9829;

pub fn descriptor(id: FunctionId) -> BenchmarkDescriptor {
    use Category::*;
    let (name, category, range, dims, global_optimum) = match id.0 {
        1 => ("Sphere", Unimodal, (-100.0, 100.0), 30, 0.0),
        2 => ("Schwefel 2.22", Unimodal, (-10.0, 10.0), 30, 0.0),
        3 => ("Schwefel 1.2", Unimodal, (-100.0, 100.0), 30, 0.0),
        4 => ("Schwefel 2.21", Unimodal, (-100.0, 100.0), 30, 0.0),
        5 => ("Rosenbrock", Unimodal, (-30.0, 30.0), 30, 0.0),
        6 => ("Step", Unimodal, (-100.0, 100.0), 30, 0.0),
        7 => ("Quartic", Unimodal, (-1.28, 1.28), 30, 0.0),
        8 => ("Schwefel", Multimodal, (-500.0, 500.0), 30, SCHWEFEL_PER_DIM * 30.0),
        9 => ("Rastrigin", Multimodal, (-5.12, 5.12), 30, 0.0),
        10 => ("Ackley", Multimodal, (-32.0, 32.0), 30, 0.0),
        11 => ("Griewank", Multimodal, (-600.0, 600.0), 30, 0.0),
        12 => ("Penalized", Multimodal, (-50.0, 50.0), 30, 0.0),
        13 => ("Penalized 2", Multimodal, (-50.0, 50.0), 30, 0.0),
        14 => ("Foxholes", FixedDimensionMultimodal, (-65.0, 65.0), 2, 0.998004),
        15 => ("Kowalik", FixedDimensionMultimodal, (-5.0, 5.0), 4, 0.0003075),
        16 => ("Six-hump Camel-Back", FixedDimensionMultimodal, (-5.0, 5.0), 2, -1.03163),
        17 => ("Branin", FixedDimensionMultimodal, (-5.0, 5.0), 2, 0.398),
        18 => ("Goldstein-Price", FixedDimensionMultimodal, (-2.0, 2.0), 2, 3.0),
        // canonical unit-cube domain
        19 => ("Hartman 3", FixedDimensionMultimodal, (0.0, 1.0), 3, -3.8628),
        20 => ("Hartman 6", FixedDimensionMultimodal, (0.0, 1.0), 6, -3.322),
        21 => ("Shekel 5", FixedDimensionMultimodal, (0.0, 10.0), 4, -10.1532),
        22 => ("Shekel 7", FixedDimensionMultimodal, (0.0, 10.0), 4, -10.4028),
        23 => ("Shekel 10", FixedDimensionMultimodal, (0.0, 10.0), 4, -10.5363),
        _ => unreachable!("FunctionId is validated on construction"),
    };
    BenchmarkDescriptor { id, name, category, range, dims, global_optimum }
}

/// Descriptor lookup by name such as `"F8"`.
pub fn descriptor_by_name(name: &str) -> Result<BenchmarkDescriptor, BenchmarkError> {
    Ok(descriptor(name.parse()?))
}

/// F1..F23 in order.
pub fn suite() -> Vec<BenchmarkDescriptor> {
    FunctionId::all().map(descriptor).collect()
}

/// Value of benchmark `id` at `x`. Only F7 consumes `rng`.
pub fn evaluate<R: Rng + ?Sized>(id: FunctionId, x: &[f64], rng: &mut R) -> Result<f64, BenchmarkError> {
    let dims = descriptor(id).dims;
    if x.len() != dims {
        return Err(BenchmarkError::Dimension { id, expected: dims, got: x.len() });
    }
    Ok(match id.0 {
        1 => sphere(x),
        2 => schwefel_2_22(x),
        3 => schwefel_1_2(x),
        4 => schwefel_2_21(x),
        5 => rosenbrock(x),
        6 => step(x),
        7 => quartic(x) + rng.random::<f64>(),
        8 => schwefel(x),
        9 => rastrigin(x),
        10 => ackley(x),
        11 => griewank(x),
        12 => penalized(x),
        13 => penalized2(x),
        14 => foxholes(x),
        15 => kowalik(x),
        16 => six_hump_camel(x),
        17 => branin(x),
        18 => goldstein_price(x),
        19 => hartman(x, &HARTMAN3_A, &HARTMAN3_P),
        20 => hartman(x, &HARTMAN6_A, &HARTMAN6_P),
        21 => shekel(x, 5),
        22 => shekel(x, 7),
        23 => shekel(x, 10),
        _ => unreachable!(),
    })
}

/// A benchmark function as an optimizer objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Benchmark(pub FunctionId);

impl Objective for Benchmark {
    fn evaluate(&mut self, x: &[f64], rng: &mut RunRng) -> Result<f64, ObjectiveError> {
        evaluate(self.0, x, rng).map_err(|e| ObjectiveError(e.to_string()))
    }
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn schwefel_2_22(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
}

pub fn schwefel_1_2(x: &[f64]) -> f64 {
    let mut prefix = 0.0;
    let mut total = 0.0;
    for v in x {
        prefix += v;
        total += prefix * prefix;
    }
    total
}

pub fn schwefel_2_21(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
        .sum()
}

pub fn step(x: &[f64]) -> f64 {
    x.iter().map(|v| (v + 0.5).floor().powi(2)).sum()
}

/// Noise-free part of F7.
pub fn quartic(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v.powi(4)).sum()
}

pub fn schwefel(x: &[f64]) -> f64 {
    x.iter().map(|v| -v * v.abs().sqrt().sin()).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>() + 10.0 * x.len() as f64
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod: f64 = x.iter().enumerate().map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos()).product();
    sum - prod + 1.0
}

fn penalty(v: f64, a: f64, k: f64, m: i32) -> f64 {
    if v > a {
        k * (v - a).powi(m)
    } else if v < -a {
        k * (-v - a).powi(m)
    } else {
        0.0
    }
}

pub fn penalized(x: &[f64]) -> f64 {
    let n = x.len();
    let y: Vec<f64> = x.iter().map(|v| 1.0 + (v + 1.0) / 4.0).collect();
    let inner: f64 = y
        .windows(2)
        .map(|w| (w[0] - 1.0).powi(2) * (1.0 + 10.0 * (PI * w[1]).sin().powi(2)))
        .sum();
    let core = 10.0 * (PI * y[0]).sin().powi(2) + inner + (y[n - 1] - 1.0).powi(2);
    PI / n as f64 * core + x.iter().map(|&v| penalty(v, 10.0, 100.0, 4)).sum::<f64>()
}

pub fn penalized2(x: &[f64]) -> f64 {
    let n = x.len();
    let inner: f64 = x
        .windows(2)
        .map(|w| (w[0] - 1.0).powi(2) * (1.0 + (3.0 * PI * w[1]).sin().powi(2)))
        .sum();
    let last = x[n - 1];
    let core = (3.0 * PI * x[0]).sin().powi(2) + inner + (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
    0.1 * core + x.iter().map(|&v| penalty(v, 5.0, 100.0, 4)).sum::<f64>()
}

const FOXHOLE_GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];

pub fn foxholes(x: &[f64]) -> f64 {
    let mut s = 1.0 / 500.0;
    for j in 0..25 {
        let a0 = FOXHOLE_GRID[j % 5];
        let a1 = FOXHOLE_GRID[j / 5];
        s += 1.0 / ((j + 1) as f64 + (x[0] - a0).powi(6) + (x[1] - a1).powi(6));
    }
    1.0 / s
}

const KOWALIK_A: [f64; 11] = [0.1957, 0.1947, 0.1735, 0.16, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246];
const KOWALIK_B_INV: [f64; 11] = [0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0];

pub fn kowalik(x: &[f64]) -> f64 {
    KOWALIK_A
        .iter()
        .zip(KOWALIK_B_INV)
        .map(|(a, binv)| {
            let b = 1.0 / binv;
            let model = x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]);
            (a - model).powi(2)
        })
        .sum()
}

pub fn six_hump_camel(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    4.0 * a * a - 2.1 * a.powi(4) + a.powi(6) / 3.0 + a * b - 4.0 * b * b + 4.0 * b.powi(4)
}

pub fn branin(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (b - 5.1 / (4.0 * PI * PI) * a * a + 5.0 / PI * a - 6.0).powi(2) + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * a.cos() + 10.0
}

pub fn goldstein_price(x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    let t1 = 1.0 + (a + b + 1.0).powi(2) * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
    let t2 = 30.0
        + (2.0 * a - 3.0 * b).powi(2) * (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b);
    t1 * t2
}

const HARTMAN_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

const HARTMAN3_A: [[f64; 3]; 4] = [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]];

const HARTMAN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.03815, 0.5743, 0.8828],
];

const HARTMAN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];

const HARTMAN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

fn hartman<const D: usize>(x: &[f64], a: &[[f64; D]; 4], p: &[[f64; D]; 4]) -> f64 {
    -(0..4)
        .map(|i| {
            let e: f64 = (0..D).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            HARTMAN_C[i] * (-e).exp()
        })
        .sum::<f64>()
}

const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];

const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

fn shekel(x: &[f64], m: usize) -> f64 {
    -(0..m)
        .map(|i| {
            let d: f64 = x.iter().zip(&SHEKEL_A[i]).map(|(v, a)| (v - a).powi(2)).sum();
            1.0 / (d + SHEKEL_C[i])
        })
        .sum::<f64>()
}
