//! Position-update rules of the gorilla troops optimizer.
//!
//! Each rule is split into a deterministic kernel taking its random numbers
//! as arguments and a sampling wrapper that draws them from the run RNG.
//! The kernels are what the unit tests pin down.

use crate::config::OptimizerConfig;
use crate::space::{Individual, Population, SearchSpace};
use rand::Rng;
use rand_distr::StandardNormal;

/// Per-iteration schedule values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationState {
    pub iter: usize,
    pub max_iter: usize,
    /// `C = F * (1 - iter / max_iter)`.
    pub c: f64,
    /// `F = cos(2 r5) + 1`.
    pub f: f64,
}

impl IterationState {
    pub fn from_draw(iter: usize, max_iter: usize, r5: f64) -> Self {
        let f = (2.0 * r5).cos() + 1.0;
        let c = f * (1.0 - iter as f64 / max_iter as f64);
        Self { iter, max_iter, c, f }
    }
}

/// Draws `r5` and derives C and F for iteration `iter` (0-based).
pub fn update_schedule<R: Rng + ?Sized>(iter: usize, max_iter: usize, rng: &mut R) -> IterationState {
    debug_assert!(iter < max_iter);
    IterationState::from_draw(iter, max_iter, rng.random::<f64>())
}

fn uniform_sym<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Which of the three exploration behaviours produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplorationBranch {
    /// Migration to an unknown location (`r4 < p`).
    Relocate,
    /// Move towards a randomly chosen member (`r4 >= 0.5`).
    TowardMember,
    /// Move relative to a random candidate of the current sweep.
    RelativeToCandidate,
}

pub fn exploration_branch(r4: f64, p: f64) -> ExplorationBranch {
    if r4 < p {
        ExplorationBranch::Relocate
    } else if r4 >= 0.5 {
        ExplorationBranch::TowardMember
    } else {
        ExplorationBranch::RelativeToCandidate
    }
}

/// `(r2 - C) * X_rand + L * (Z ⊙ x)`.
pub fn toward_member(x: &[f64], x_rand: &[f64], r2: f64, c: f64, big_l: f64, z: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(x_rand)
        .zip(z)
        .map(|((xi, xr), zi)| (r2 - c) * xr + big_l * (zi * xi))
        .collect()
}

/// `x - L * (L * (x - GP_rand) + r3 * (x - GP_rand))`.
pub fn relative_to_candidate(x: &[f64], gp_rand: &[f64], big_l: f64, r3: f64) -> Vec<f64> {
    x.iter()
        .zip(gp_rand)
        .map(|(xi, gi)| {
            let d = xi - gi;
            xi - big_l * (big_l * d + r3 * d)
        })
        .collect()
}

/// One exploration move for `x`, clamped to `space`.
///
/// `sweep` holds the candidates already produced in the current sweep; the
/// third branch picks its reference among them, or among the incumbents
/// while the sweep is still empty.
///
/// Relocation uses one scalar `r1` for every dimension, so the fresh point
/// lies on the box diagonal `lower + (upper - lower) r1`.
///
/// Draw order: `r4`, then for the relocation branch `r1`;
/// for the member branch `r2`, `l`, `Z` per dimension and the member index;
/// for the candidate branch `l`, `r3` and the candidate index.
pub fn exploration_move<R: Rng + ?Sized>(
    x: &Individual,
    pop: &Population,
    sweep: &[Vec<f64>],
    state: &IterationState,
    space: &SearchSpace,
    cfg: &OptimizerConfig,
    rng: &mut R,
) -> (Vec<f64>, ExplorationBranch) {
    let dims = space.dims();
    let branch = exploration_branch(rng.random::<f64>(), cfg.p);
    let mut out = match branch {
        ExplorationBranch::Relocate => {
            let r1 = rng.random::<f64>();
            space.point_at(&vec![r1; dims])
        }
        ExplorationBranch::TowardMember => {
            let r2 = rng.random::<f64>();
            let big_l = state.c * uniform_sym(rng);
            let z: Vec<f64> = (0..dims).map(|_| state.c * uniform_sym(rng)).collect();
            let x_rand = &pop.members()[rng.random_range(0..pop.len())].position;
            toward_member(&x.position, x_rand, r2, state.c, big_l, &z)
        }
        ExplorationBranch::RelativeToCandidate => {
            let big_l = state.c * uniform_sym(rng);
            let r3 = rng.random::<f64>();
            let gp_rand = if sweep.is_empty() {
                &pop.members()[rng.random_range(0..pop.len())].position
            } else {
                &sweep[rng.random_range(0..sweep.len())]
            };
            relative_to_candidate(&x.position, gp_rand, big_l, r3)
        }
    };
    space.clamp(&mut out);
    (out, branch)
}

/// `M[j] = (|mean[j]|^g)^(1/g)` with `0^g` taken as 0.
pub fn silverback_scale(mean: &[f64], g: f64) -> Vec<f64> {
    mean.iter()
        .map(|m| {
            let a = m.abs();
            if a == 0.0 {
                0.0
            } else {
                a.powf(g).powf(1.0 / g)
            }
        })
        .collect()
}

/// `x + L * M ⊙ (x - X_SB)` with `g = 2^L`.
pub fn follow_silverback_with(x: &[f64], silverback: &[f64], mean: &[f64], big_l: f64) -> Vec<f64> {
    let m = silverback_scale(mean, 2f64.powf(big_l));
    x.iter()
        .zip(silverback)
        .zip(&m)
        .map(|((xi, si), mi)| big_l * mi * (xi - si) + xi)
        .collect()
}

/// Follow-the-silverback move, clamped. `mean` is the mean candidate position
/// of the current iteration. Draws one `l`.
pub fn follow_silverback<R: Rng + ?Sized>(
    x: &Individual,
    silverback: &Individual,
    mean: &[f64],
    state: &IterationState,
    space: &SearchSpace,
    rng: &mut R,
) -> Vec<f64> {
    let big_l = state.c * uniform_sym(rng);
    let mut out = follow_silverback_with(&x.position, &silverback.position, mean, big_l);
    space.clamp(&mut out);
    out
}

/// Normal draws used by the competition move: one per dimension, or a single
/// value shared by all dimensions.
#[derive(Debug, Clone, PartialEq)]
pub enum Impact {
    PerDimension(Vec<f64>),
    Shared(f64),
}

impl Impact {
    fn at(&self, j: usize) -> f64 {
        match self {
            Impact::PerDimension(e) => e[j],
            Impact::Shared(e) => *e,
        }
    }
}

/// `X_SB - Q * (beta E) ⊙ (X_SB - x)` with `Q = 2 r6 - 1`.
pub fn compete_with(x: &[f64], silverback: &[f64], r6: f64, impact: &Impact, beta: f64) -> Vec<f64> {
    let q = 2.0 * r6 - 1.0;
    silverback
        .iter()
        .zip(x)
        .enumerate()
        .map(|(j, (s, xi))| s - (s * q - xi * q) * (beta * impact.at(j)))
        .collect()
}

/// Competition-for-females move, clamped. Draws `r6`, `r7`, then the normal impact.
pub fn compete_for_females<R: Rng + ?Sized>(
    x: &Individual,
    silverback: &Individual,
    cfg: &OptimizerConfig,
    space: &SearchSpace,
    rng: &mut R,
) -> Vec<f64> {
    let r6 = rng.random::<f64>();
    let r7 = rng.random::<f64>();
    let impact = if r7 >= 0.5 {
        Impact::PerDimension((0..space.dims()).map(|_| rng.sample(StandardNormal)).collect())
    } else {
        Impact::Shared(rng.sample(StandardNormal))
    };
    let mut out = compete_with(&x.position, &silverback.position, r6, &impact, cfg.beta);
    space.clamp(&mut out);
    out
}
