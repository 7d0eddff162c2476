//! Hyperparameter search with AGTO.
//!
//! Five network hyperparameters (hidden neurons, learning rate, batch size,
//! epochs, activation) are encoded as a continuous gene box, searched by the
//! optimizer and decoded into trials. Trials are scored by an [`Evaluator`]:
//! the built-in [`SurrogateEvaluator`], a closure, or an external process
//! speaking the line-delimited JSON protocol of [`protocol`].
//!
//! ```
//! use agto_core::OptimizerConfig;
//! use agto_hpo::{run_hpo, HyperparameterSpace, SurrogateEvaluator};
//!
//! let cfg = OptimizerConfig { max_evals: 600, seed: 1, ..Default::default() };
//! let out = run_hpo(&HyperparameterSpace::default(), &mut SurrogateEvaluator, &cfg).unwrap();
//! assert!(out.best.fitness < 1.0);
//! ```

pub mod evaluator;
pub mod protocol;
pub mod run;
pub mod space;
pub mod subprocess;
pub mod surrogate;

pub use evaluator::{EvalError, Evaluator, SurrogateEvaluator};
pub use run::{random_search, run_hpo, HpoError, HpoOutcome, TrialRecord};
pub use space::{Activation, DecodeError, HyperparameterSpace, TrialParams};
pub use subprocess::{SubprocessEvaluator, DEFAULT_TIMEOUT};
pub use surrogate::surrogate_objective;
