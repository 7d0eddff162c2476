use crate::space::TrialParams;
use crate::surrogate::surrogate_objective;
use std::time::Duration;
use thiserror::Error;

/// Why a single evaluation attempt produced no fitness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("could not start evaluator: {0}")]
    Spawn(String),
    #[error("evaluator exited: {0}")]
    Crashed(String),
    #[error("no reply within {0:?}")]
    Timeout(Duration),
    #[error("malformed reply: {0}")]
    Malformed(String),
    #[error("evaluator reported failure: {0}")]
    Rejected(String),
}

/// Something that scores a trial; lower is better.
pub trait Evaluator {
    fn evaluate(&mut self, trial_id: u64, params: &TrialParams) -> Result<f64, EvalError>;
}

impl<F> Evaluator for F
where
    F: FnMut(u64, &TrialParams) -> Result<f64, EvalError>,
{
    fn evaluate(&mut self, trial_id: u64, params: &TrialParams) -> Result<f64, EvalError> {
        self(trial_id, params)
    }
}

/// In-process evaluator backed by [`surrogate_objective`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SurrogateEvaluator;

impl Evaluator for SurrogateEvaluator {
    fn evaluate(&mut self, _trial_id: u64, params: &TrialParams) -> Result<f64, EvalError> {
        Ok(surrogate_objective(params))
    }
}
