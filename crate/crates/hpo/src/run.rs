use crate::evaluator::Evaluator;
use crate::space::{HyperparameterSpace, TrialParams};
use agto_core::optimizer::run_optimizer_with;
use agto_core::{seeded_rng, Objective, ObjectiveError, OptimizeError, OptimizerConfig, RunRng};
use serde::Serialize;
use std::collections::{HashMap, VecDeque};
use std::time::Instant;
use thiserror::Error;

/// Trials inspected by the failure-rate abort rule.
pub const FAILURE_WINDOW: usize = 20;
/// Failures within a full window that abort the run.
pub const FAILURE_LIMIT: usize = FAILURE_WINDOW / 2;

/// Fitness handed to the optimizer for a failed trial. The optimizer only
/// accepts finite values; the trial record itself keeps +inf.
const FAILED_FITNESS: f64 = f64::MAX;

/// One evaluator-scored configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub params: TrialParams,
    /// Evaluator fitness; +inf when both attempts failed.
    pub fitness: f64,
    /// Seconds spent on the trial, retry included.
    pub wall_time: f64,
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HpoOutcome {
    pub best: TrialRecord,
    /// Every evaluator trial in trial-id order.
    pub history: Vec<TrialRecord>,
    /// Optimizer evaluations answered from the cache.
    pub cache_hits: usize,
    /// Optimizer evaluations, cached ones included.
    pub evals_used: usize,
}

#[derive(Debug, Error)]
pub enum HpoError {
    #[error(transparent)]
    Optimizer(OptimizeError),
    #[error("{failed} of the last {window} trials failed; giving up")]
    TooManyFailures { failed: usize, window: usize, history: Vec<TrialRecord> },
    #[error("no trial succeeded")]
    NoSuccessfulTrial { history: Vec<TrialRecord> },
}

struct Trials<'e, E: ?Sized> {
    evaluator: &'e mut E,
    space: HyperparameterSpace,
    cache: HashMap<(u32, u64, u32, u32, crate::space::Activation), f64>,
    history: Vec<TrialRecord>,
    recent: VecDeque<bool>,
    cache_hits: usize,
    calls: usize,
    abort: Option<(usize, usize)>,
}

impl<'e, E: Evaluator + ?Sized> Trials<'e, E> {
    fn new(evaluator: &'e mut E, space: HyperparameterSpace) -> Self {
        Self {
            evaluator,
            space,
            cache: HashMap::new(),
            history: Vec::new(),
            recent: VecDeque::with_capacity(FAILURE_WINDOW),
            cache_hits: 0,
            calls: 0,
            abort: None,
        }
    }

    /// Scores `params`, reusing an earlier result for the same trial.
    fn score(&mut self, params: TrialParams) -> Result<f64, ObjectiveError> {
        self.calls += 1;
        if let Some(&f) = self.cache.get(&params.key()) {
            self.cache_hits += 1;
            return Ok(f);
        }
        let trial_id = self.history.len() as u64;
        let start = Instant::now();
        let result = self.evaluator.evaluate(trial_id, &params).or_else(|_| self.evaluator.evaluate(trial_id, &params));
        let wall_time = start.elapsed().as_secs_f64();
        let (fitness, error, optimizer_fitness) = match result {
            Ok(f) => (f, None, f),
            Err(e) => (f64::INFINITY, Some(e.to_string()), FAILED_FITNESS),
        };
        self.cache.insert(params.key(), optimizer_fitness);
        let failed = error.is_some();
        self.history.push(TrialRecord { trial_id, params, fitness, wall_time, error });

        if self.recent.len() == FAILURE_WINDOW {
            self.recent.pop_front();
        }
        self.recent.push_back(failed);
        let failures = self.recent.iter().filter(|&&f| f).count();
        if self.recent.len() == FAILURE_WINDOW && failures >= FAILURE_LIMIT {
            self.abort = Some((failures, FAILURE_WINDOW));
            return Err(ObjectiveError(format!("{failures} of the last {FAILURE_WINDOW} trials failed")));
        }
        Ok(optimizer_fitness)
    }

    fn finish(self) -> Result<HpoOutcome, HpoError> {
        let Trials { history, cache_hits, calls, abort, .. } = self;
        if let Some((failed, window)) = abort {
            return Err(HpoError::TooManyFailures { failed, window, history });
        }
        // earliest trial wins ties
        let best = history
            .iter()
            .filter(|t| !t.failed())
            .fold(None::<&TrialRecord>, |acc, t| match acc {
                Some(b) if b.fitness <= t.fitness => Some(b),
                _ => Some(t),
            })
            .cloned();
        match best {
            Some(best) => Ok(HpoOutcome { best, history, cache_hits, evals_used: calls }),
            None => Err(HpoError::NoSuccessfulTrial { history }),
        }
    }
}

impl<E: Evaluator + ?Sized> Objective for Trials<'_, E> {
    fn evaluate(&mut self, x: &[f64], _rng: &mut RunRng) -> Result<f64, ObjectiveError> {
        let params = self.space.decode(x).map_err(|e| ObjectiveError(e.to_string()))?;
        self.score(params)
    }
}

/// Tunes the hyperparameters in `space` with AGTO, scoring trials through
/// `evaluator`.
///
/// `cfg.max_evals` counts optimizer evaluations. Positions decoding to an
/// already scored trial reuse its fitness, so the evaluator sees at most
/// that many distinct trials. A trial whose two attempts both fail is
/// recorded with fitness +inf and never becomes the best.
pub fn run_hpo<E: Evaluator + ?Sized>(
    space: &HyperparameterSpace,
    evaluator: &mut E,
    cfg: &OptimizerConfig,
) -> Result<HpoOutcome, HpoError> {
    let search = space.as_search_space();
    let mut trials = Trials::new(evaluator, space.clone());
    match run_optimizer_with(&mut trials, &search, cfg, &mut |_| {}) {
        Ok(_) => trials.finish(),
        Err(OptimizeError::Aborted(_)) if trials.abort.is_some() => trials.finish(),
        Err(e) => Err(HpoError::Optimizer(e)),
    }
}

/// Baseline: `samples` uniform draws from the gene box, decoded and scored
/// like [`run_hpo`] trials.
pub fn random_search<E: Evaluator + ?Sized>(
    space: &HyperparameterSpace,
    evaluator: &mut E,
    samples: usize,
    seed: u64,
) -> Result<HpoOutcome, HpoError> {
    let search = space.as_search_space();
    let mut rng = seeded_rng(seed);
    let mut trials = Trials::new(evaluator, space.clone());
    for _ in 0..samples {
        let params = space.decode(&search.sample(&mut rng)).expect("samples lie in the gene box");
        if trials.score(params).is_err() {
            break;
        }
    }
    trials.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{EvalError, SurrogateEvaluator};

    fn small_cfg(seed: u64) -> OptimizerConfig {
        OptimizerConfig { pop_size: 10, max_evals: 400, seed, ..Default::default() }
    }

    #[test]
    fn constant_evaluator() {
        let mut calls = 0;
        let mut ev = |_: u64, _: &TrialParams| {
            calls += 1;
            Ok(1.0)
        };
        let out = run_hpo(&HyperparameterSpace::default(), &mut ev, &small_cfg(1)).unwrap();
        assert_eq!(out.best.fitness, 1.0);
        assert_eq!(out.best.trial_id, 0);
        assert_eq!(out.history.len(), calls);
        assert_eq!(out.history.len() + out.cache_hits, out.evals_used);
    }

    #[test]
    fn duplicate_trials_hit_the_cache() {
        // a narrow box clamps many moves onto the same corner trials
        let space = HyperparameterSpace::new((10, 11), (0.5, 0.5000001), (200, 201), (2, 3)).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut ev = |_: u64, p: &TrialParams| {
            assert!(seen.insert(p.key()), "trial {p:?} evaluated twice");
            Ok(f64::from(p.neurons) + p.learning_rate)
        };
        let out = run_hpo(&space, &mut ev, &small_cfg(2)).unwrap();
        assert!(out.cache_hits > 0);
        assert_eq!(out.history.len() + out.cache_hits, out.evals_used);
    }

    #[test]
    fn history_is_ordered_and_within_budget() {
        let cfg = small_cfg(3);
        let out = run_hpo(&HyperparameterSpace::default(), &mut SurrogateEvaluator, &cfg).unwrap();
        assert!(out.history.iter().enumerate().all(|(i, t)| t.trial_id == i as u64));
        assert!(out.evals_used <= cfg.max_evals);
        assert!(out.history.len() <= cfg.max_evals);
        let min = out.history.iter().map(|t| t.fitness).fold(f64::INFINITY, f64::min);
        assert_eq!(out.best.fitness, min);
    }

    #[test]
    fn one_retry_then_infinite_fitness() {
        let mut attempts = HashMap::new();
        let mut ev = |id: u64, _: &TrialParams| {
            *attempts.entry(id).or_insert(0) += 1;
            if id % 4 == 1 {
                Err(EvalError::Rejected("diverged".into()))
            } else {
                Ok(id as f64)
            }
        };
        let out = run_hpo(&HyperparameterSpace::default(), &mut ev, &small_cfg(4)).unwrap();
        for t in &out.history {
            if t.trial_id % 4 == 1 {
                assert_eq!(t.fitness, f64::INFINITY);
                assert_eq!(t.error.as_deref(), Some("evaluator reported failure: diverged"));
                assert_eq!(attempts[&t.trial_id], 2);
            } else {
                assert!(t.fitness.is_finite());
                assert_eq!(attempts[&t.trial_id], 1);
            }
        }
        assert_eq!(out.best.trial_id, 0);
    }

    #[test]
    fn flaky_trial_recovers_on_retry() {
        let mut failed_once = false;
        let mut ev = |_: u64, _: &TrialParams| {
            if failed_once {
                Ok(0.5)
            } else {
                failed_once = true;
                Err(EvalError::Crashed("signal 9".into()))
            }
        };
        let out = run_hpo(&HyperparameterSpace::default(), &mut ev, &small_cfg(5)).unwrap();
        assert!(out.history.iter().all(|t| !t.failed()));
    }

    #[test]
    fn half_failing_window_aborts() {
        let mut ev = |id: u64, _: &TrialParams| if id % 2 == 0 { Err(EvalError::Timeout(std::time::Duration::ZERO)) } else { Ok(1.0) };
        match run_hpo(&HyperparameterSpace::default(), &mut ev, &small_cfg(6)) {
            Err(HpoError::TooManyFailures { failed, window, history }) => {
                assert_eq!((failed, window), (10, 20));
                assert_eq!(history.len(), 20);
            }
            other => panic!("expected abort, got {other:?}"),
        }
    }

    #[test]
    fn sparse_failures_do_not_abort() {
        // 9 failures in every 20 consecutive trials
        let mut ev = |id: u64, _: &TrialParams| if id % 20 < 9 { Err(EvalError::Rejected("x".into())) } else { Ok(2.0) };
        let out = run_hpo(&HyperparameterSpace::default(), &mut ev, &small_cfg(7)).unwrap();
        assert!(out.history.len() > 20);
    }

    #[test]
    fn all_failing_short_run_reports_no_success() {
        let mut ev = |_: u64, _: &TrialParams| Err(EvalError::Rejected("x".into()));
        let cfg = OptimizerConfig { pop_size: 5, max_evals: 10, ..Default::default() };
        assert!(matches!(
            run_hpo(&HyperparameterSpace::default(), &mut ev, &cfg),
            Err(HpoError::NoSuccessfulTrial { .. })
        ));
    }

    #[test]
    fn random_search_is_seeded() {
        let a = random_search(&HyperparameterSpace::default(), &mut SurrogateEvaluator, 200, 9).unwrap();
        let b = random_search(&HyperparameterSpace::default(), &mut SurrogateEvaluator, 200, 9).unwrap();
        assert_eq!(a.best, TrialRecord { wall_time: a.best.wall_time, ..b.best });
        assert_eq!(a.evals_used, 200);
    }

    #[test]
    fn invalid_config_is_reported() {
        let cfg = OptimizerConfig { max_evals: 3, ..Default::default() };
        assert!(matches!(
            run_hpo(&HyperparameterSpace::default(), &mut SurrogateEvaluator, &cfg),
            Err(HpoError::Optimizer(OptimizeError::Config(_)))
        ));
    }
}
