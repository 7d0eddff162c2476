//! HPO sessions driven from the command line.

use crate::config::HpoSettings;
use crate::error::{HarnessError, Result};
use crate::tables::{csv_writer, fmt_f64, write_file};
use agto_core::OptimizerConfig;
use agto_hpo::{run_hpo, Evaluator, HpoError, HpoOutcome, HyperparameterSpace, SubprocessEvaluator, SurrogateEvaluator, TrialRecord};
use std::path::{Path, PathBuf};
use std::time::Duration;

pub const DEFAULT_BUDGET: usize = 2_000;

/// Settings with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct HpoRun {
    pub evaluator_cmd: Option<String>,
    pub optimizer: OptimizerConfig,
    pub output_dir: PathBuf,
    pub timeout: Duration,
}

impl HpoSettings {
    pub fn into_run(self) -> Result<HpoRun> {
        let optimizer = OptimizerConfig {
            max_evals: self.budget.unwrap_or(DEFAULT_BUDGET),
            pop_size: self.pop.unwrap_or(OptimizerConfig::default().pop_size),
            seed: self.seed.unwrap_or(0),
            ..Default::default()
        };
        optimizer.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(HpoRun {
            evaluator_cmd: self.evaluator_cmd,
            optimizer,
            output_dir: self.out.unwrap_or_else(|| PathBuf::from("hpo")),
            timeout: self.timeout.map_or(agto_hpo::DEFAULT_TIMEOUT, Duration::from_secs),
        })
    }
}

/// Tunes the hyperparameters and writes trials.csv and best.json.
///
/// The trial history is written even when the run aborts on failures.
pub fn run_hpo_session(run: &HpoRun) -> Result<HpoOutcome> {
    let out = &run.output_dir;
    std::fs::create_dir_all(out).map_err(HarnessError::io(out))?;
    let space = HyperparameterSpace::default();
    let mut evaluator: Box<dyn Evaluator> = match &run.evaluator_cmd {
        Some(cmd) => Box::new(SubprocessEvaluator::spawn(cmd, run.timeout)?),
        None => Box::new(SurrogateEvaluator),
    };
    match run_hpo(&space, evaluator.as_mut(), &run.optimizer) {
        Ok(outcome) => {
            write_trials(&out.join("trials.csv"), &outcome.history)?;
            let mut best = serde_json::to_string_pretty(&outcome.best).expect("trial serializes");
            best.push('\n');
            write_file(&out.join("best.json"), best.as_bytes())?;
            Ok(outcome)
        }
        Err(e) => {
            if let HpoError::TooManyFailures { history, .. } | HpoError::NoSuccessfulTrial { history } = &e {
                write_trials(&out.join("trials.csv"), history)?;
            }
            Err(e.into())
        }
    }
}

pub const TRIALS_HEADER: [&str; 9] =
    ["trial_id", "neurons", "learning_rate", "batch_size", "epochs", "activation", "fitness", "wall_time", "error"];

fn write_trials(path: &Path, history: &[TrialRecord]) -> Result<()> {
    let mut w = csv_writer(path)?;
    let io = |e: csv::Error| HarnessError::io(path)(e.into());
    w.write_record(TRIALS_HEADER).map_err(io)?;
    for t in history {
        let p = &t.params;
        w.write_record([
            t.trial_id.to_string(),
            p.neurons.to_string(),
            fmt_f64(p.learning_rate),
            p.batch_size.to_string(),
            p.epochs.to_string(),
            p.activation.to_string(),
            fmt_f64(t.fitness),
            format!("{:.6}", t.wall_time),
            t.error.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(HarnessError::io(path))
}
