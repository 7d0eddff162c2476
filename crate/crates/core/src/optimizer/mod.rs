//! Budget-bounded AGTO main loop.
//!
//! One run proceeds as:
//!
//! 1. uniform random troop of N; with opposition enabled the N opposite
//!    points are added and the best N of the 2N survive;
//! 2. per iteration: draw the C schedule, run an exploration sweep with
//!    member-wise greedy replacement, run an exploitation sweep (follow the
//!    silverback while `C >= W`, otherwise compete for females) with greedy
//!    replacement, and with the rotation gate enabled mutate every member and
//!    keep the best N of old and mutated.
//!
//! The evaluation budget fixes the number of iterations up front (see
//! [`OptimizerConfig::max_iter`]), so a run never exceeds `max_evals`
//! objective calls.

pub mod operators;
pub mod opposition;
pub mod rotation;
pub mod selection;

pub use operators::{
    compete_for_females, exploration_move, follow_silverback, update_schedule, ExplorationBranch, IterationState,
};
pub use opposition::{init_population, opposite_point, opposition_of};
pub use rotation::qrg_mutate;
pub use selection::{evaluate_population, greedy_select, pool_select};

use crate::config::OptimizerConfig;
use crate::error::OptimizeError;
use crate::space::{mean_position, Individual, Population, SearchSpace};
use crate::{seeded_rng, RunRng};
use thiserror::Error;

/// Failure reported by an objective that cannot produce a value at all.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ObjectiveError(pub String);

/// A function to minimize.
///
/// Any `FnMut(&[f64]) -> f64` closure is an objective. Implementors that
/// need randomness (noisy benchmarks) draw it from the run's generator so
/// that runs stay reproducible.
pub trait Objective {
    fn evaluate(&mut self, x: &[f64], rng: &mut RunRng) -> Result<f64, ObjectiveError>;
}

impl<F> Objective for F
where
    F: FnMut(&[f64]) -> f64,
{
    fn evaluate(&mut self, x: &[f64], _rng: &mut RunRng) -> Result<f64, ObjectiveError> {
        Ok(self(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetStatus {
    Available,
    Exhausted,
}

/// Counting wrapper around an objective: enforces the budget, rejects
/// non-finite values and remembers the best point ever evaluated.
pub struct Evaluator<'a, O: ?Sized> {
    objective: &'a mut O,
    limit: usize,
    used: usize,
    best: Option<Individual>,
}

impl<'a, O: Objective + ?Sized> Evaluator<'a, O> {
    pub fn new(objective: &'a mut O, limit: usize) -> Self {
        Self { objective, limit, used: 0, best: None }
    }

    /// `Ok(None)` once the budget is spent; the objective is not called then.
    pub fn evaluate(&mut self, x: &[f64], rng: &mut RunRng) -> Result<Option<f64>, OptimizeError> {
        if self.used >= self.limit {
            return Ok(None);
        }
        self.used += 1;
        let value = self.objective.evaluate(x, rng).map_err(|e| OptimizeError::Aborted(e.0))?;
        if !value.is_finite() {
            return Err(OptimizeError::NonFinite { value, position: x.to_vec() });
        }
        if self.best.as_ref().is_none_or(|b| value < b.fitness) {
            self.best = Some(Individual::new(x.to_vec(), value));
        }
        Ok(Some(value))
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.limit - self.used
    }

    pub fn best(&self) -> Option<&Individual> {
        self.best.as_ref()
    }
}

/// How often each operator fired during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorCounts {
    pub relocations: usize,
    pub member_moves: usize,
    pub candidate_moves: usize,
    pub follows: usize,
    pub competitions: usize,
    /// Opposite points generated during initialization.
    pub oppositions: usize,
    /// Individuals passed through the rotation gate.
    pub rotations: usize,
}

/// Outcome of one run.
///
/// The traces hold one entry for the initialized troop followed by one per
/// completed iteration; `evals[k]` is the cumulative objective-call count at
/// trace point `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Best-so-far fitness.
    pub convergence: Vec<f64>,
    /// Mean fitness of the troop.
    pub mean_fitness: Vec<f64>,
    pub evals: Vec<usize>,
    pub evals_used: usize,
    pub iterations: usize,
    pub counts: OperatorCounts,
}

/// Troop state handed to an observer at every iteration boundary.
pub struct Boundary<'a> {
    /// 0 after initialization, `k` after iteration `k`.
    pub iteration: usize,
    pub evals_used: usize,
    pub population: &'a Population,
}

/// Minimizes `objective` over `space`.
pub fn run_optimizer<O: Objective>(
    mut objective: O,
    space: &SearchSpace,
    cfg: &OptimizerConfig,
) -> Result<RunResult, OptimizeError> {
    run_optimizer_with(&mut objective, space, cfg, &mut |_| {})
}

/// [`run_optimizer`] with a borrowed objective and a callback invoked at every
/// iteration boundary.
pub fn run_optimizer_with<O: Objective + ?Sized>(
    objective: &mut O,
    space: &SearchSpace,
    cfg: &OptimizerConfig,
    observer: &mut dyn FnMut(&Boundary<'_>),
) -> Result<RunResult, OptimizeError> {
    cfg.validate()?;
    let max_iter = cfg.max_iter();
    let iterations = cfg.iterations();
    let mut rng = seeded_rng(cfg.seed);
    let mut evaluator = Evaluator::new(objective, cfg.max_evals);
    let mut counts = OperatorCounts::default();
    let mut trace = Trace::default();

    let mut pop = init_population(space, cfg.pop_size, &mut rng)?;
    evaluate_population(&mut pop, &mut evaluator, &mut rng)?;
    if cfg.enable_obl {
        let mut opposite = opposition_of(&pop, space)?;
        counts.oppositions += opposite.len();
        evaluate_population(&mut opposite, &mut evaluator, &mut rng)?;
        pop = pool_select(&pop, &opposite)?;
    }
    trace.record(&pop, &evaluator);
    observer(&Boundary { iteration: 0, evals_used: evaluator.used(), population: &pop });

    for iter in 0..iterations {
        let state = update_schedule(iter, max_iter, &mut rng);

        let mut sweep: Vec<Vec<f64>> = Vec::with_capacity(pop.len());
        for x in pop.members() {
            let (gp, branch) = exploration_move(x, &pop, &sweep, &state, space, cfg, &mut rng);
            match branch {
                ExplorationBranch::Relocate => counts.relocations += 1,
                ExplorationBranch::TowardMember => counts.member_moves += 1,
                ExplorationBranch::RelativeToCandidate => counts.candidate_moves += 1,
            }
            sweep.push(gp);
        }
        let mean = mean_position(sweep.iter().map(Vec::as_slice));
        let mut candidates = Population::from_positions(sweep);
        let (next, _) = greedy_select(&pop, &mut candidates, &mut evaluator, &mut rng)?;
        pop = next;

        let silverback = pop.best().clone();
        let moves: Vec<Vec<f64>> = pop
            .members()
            .iter()
            .map(|x| {
                if state.c >= cfg.w {
                    counts.follows += 1;
                    follow_silverback(x, &silverback, &mean, &state, space, &mut rng)
                } else {
                    counts.competitions += 1;
                    compete_for_females(x, &silverback, cfg, space, &mut rng)
                }
            })
            .collect();
        let mut candidates = Population::from_positions(moves);
        let (next, _) = greedy_select(&pop, &mut candidates, &mut evaluator, &mut rng)?;
        pop = next;

        if cfg.enable_qrg {
            let best = pop.best().fitness;
            let worst = pop.worst_fitness();
            let mut mutated = qrg_mutate(&pop, best, worst, cfg, space)?;
            counts.rotations += mutated.len();
            evaluate_population(&mut mutated, &mut evaluator, &mut rng)?;
            pop = pool_select(&pop, &mutated)?;
        }

        trace.record(&pop, &evaluator);
        observer(&Boundary { iteration: iter + 1, evals_used: evaluator.used(), population: &pop });
    }

    let best = evaluator.best().cloned().expect("initialization evaluates at least two points");
    Ok(RunResult {
        best_position: best.position,
        best_fitness: best.fitness,
        convergence: trace.best,
        mean_fitness: trace.mean,
        evals: trace.evals,
        evals_used: evaluator.used(),
        iterations,
        counts,
    })
}

#[derive(Default)]
struct Trace {
    best: Vec<f64>,
    mean: Vec<f64>,
    evals: Vec<usize>,
}

impl Trace {
    fn record<O: Objective + ?Sized>(&mut self, pop: &Population, evaluator: &Evaluator<'_, O>) {
        self.best.push(evaluator.best().map_or(f64::INFINITY, |b| b.fitness));
        self.mean.push(pop.mean_fitness());
        self.evals.push(evaluator.used());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn constant_objective_gives_flat_trace() {
        let space = SearchSpace::uniform(3, -5.0, 5.0).unwrap();
        let cfg = OptimizerConfig { max_evals: 900, ..Default::default() };
        let r = run_optimizer(|_: &[f64]| 7.0, &space, &cfg).unwrap();
        assert_eq!(r.best_fitness, 7.0);
        assert!(r.convergence.iter().all(|&v| v == 7.0));
        assert_eq!(r.convergence.len(), r.iterations + 1);
    }

    #[test]
    fn budget_is_respected_and_spent() {
        let space = SearchSpace::uniform(4, -5.0, 5.0).unwrap();
        let cfg = OptimizerConfig { pop_size: 10, max_evals: 1_000, ..Default::default() };
        let mut calls = 0usize;
        let r = run_optimizer(
            |x: &[f64]| {
                calls += 1;
                sphere(x)
            },
            &space,
            &cfg,
        )
        .unwrap();
        // (1000 - 20) / 30 = 32 iterations, 20 + 32 * 30 = 980 calls
        assert_eq!(r.iterations, 32);
        assert_eq!(r.evals_used, 980);
        assert_eq!(calls, 980);
        assert_eq!(*r.evals.last().unwrap(), 980);
    }

    #[test]
    fn budget_below_initialization_is_rejected() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let cfg = OptimizerConfig { pop_size: 10, max_evals: 19, ..Default::default() };
        assert!(matches!(run_optimizer(sphere, &space, &cfg), Err(OptimizeError::Config(_))));
    }

    #[test]
    fn non_finite_objective_aborts_with_position() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let cfg = OptimizerConfig { pop_size: 4, max_evals: 200, ..Default::default() };
        let err = run_optimizer(|x: &[f64]| if x[0] > 0.0 { f64::NAN } else { 1.0 }, &space, &cfg).unwrap_err();
        match err {
            OptimizeError::NonFinite { value, position } => {
                assert!(value.is_nan());
                assert!(position[0] > 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn objective_errors_abort_the_run() {
        struct Failing;
        impl Objective for Failing {
            fn evaluate(&mut self, _: &[f64], _: &mut RunRng) -> Result<f64, ObjectiveError> {
                Err(ObjectiveError("evaluator gone".into()))
            }
        }
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let cfg = OptimizerConfig { pop_size: 4, max_evals: 200, ..Default::default() };
        assert_eq!(
            run_optimizer(Failing, &space, &cfg).unwrap_err(),
            OptimizeError::Aborted("evaluator gone".into())
        );
    }

    #[test]
    fn plain_gto_never_touches_extensions() {
        let space = SearchSpace::uniform(6, -10.0, 10.0).unwrap();
        let cfg = OptimizerConfig { max_evals: 3_000, ..OptimizerConfig::gto() };
        let r = run_optimizer(sphere, &space, &cfg).unwrap();
        assert_eq!(r.counts.oppositions, 0);
        assert_eq!(r.counts.rotations, 0);
        assert!(r.counts.follows + r.counts.competitions > 0);

        let r = run_optimizer(sphere, &space, &OptimizerConfig { max_evals: 3_000, ..Default::default() }).unwrap();
        assert_eq!(r.counts.oppositions, 30);
        assert_eq!(r.counts.rotations, 30 * r.iterations);
    }

    #[test]
    fn observer_sees_every_boundary() {
        let space = SearchSpace::uniform(3, -2.0, 2.0).unwrap();
        let cfg = OptimizerConfig { pop_size: 6, max_evals: 500, ..Default::default() };
        let mut seen = Vec::new();
        let r = run_optimizer_with(&mut sphere, &space, &cfg, &mut |b| {
            assert_eq!(b.population.len(), 6);
            seen.push(b.iteration);
        })
        .unwrap();
        assert_eq!(seen, (0..=r.iterations).collect::<Vec<_>>());
    }

    #[test]
    fn sphere_converges() {
        let space = SearchSpace::uniform(10, -100.0, 100.0).unwrap();
        let cfg = OptimizerConfig { max_evals: 6_000, seed: 3, ..Default::default() };
        let r = run_optimizer(sphere, &space, &cfg).unwrap();
        assert!(r.best_fitness < 1e-10, "{}", r.best_fitness);
        assert_eq!(r.best_fitness, sphere(&r.best_position));
    }
}
