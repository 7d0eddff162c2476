use crate::error::OptimizeError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Parameters of one optimizer run.
///
/// The defaults are the AGTO settings: `p = 0.03`, `beta = 3`, `w = 0.8`,
/// rotation angles in `[0.001π, 0.035π]`, both extensions switched on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Troop size N.
    pub pop_size: usize,
    /// Budget of objective calls for the whole run, initialization included.
    pub max_evals: usize,
    /// Probability of migrating to an unknown (random) location.
    pub p: f64,
    /// Scale of the competition-for-females jump.
    pub beta: f64,
    /// Threshold on C above which gorillas follow the silverback.
    pub w: f64,
    /// Opposition-based initialization.
    pub enable_obl: bool,
    /// Quantum rotation gate mutation after every iteration.
    pub enable_qrg: bool,
    pub theta_min: f64,
    pub theta_max: f64,
    pub seed: u64,
    /// Fixed Max_Iter for the C schedule instead of the budget-derived one.
    ///
    /// Runs sharing a seed and a horizon follow the same trajectory, so a
    /// smaller budget is a prefix of a larger one.
    pub schedule_horizon: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            pop_size: 30,
            max_evals: 15_000,
            p: 0.03,
            beta: 3.0,
            w: 0.8,
            enable_obl: true,
            enable_qrg: true,
            theta_min: 0.001 * PI,
            theta_max: 0.035 * PI,
            seed: 0,
            schedule_horizon: None,
        }
    }
}

impl OptimizerConfig {
    /// Plain GTO: same parameters with both extensions disabled.
    pub fn gto() -> Self {
        Self { enable_obl: false, enable_qrg: false, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        let fail = |msg: String| Err(OptimizeError::Config(msg));
        if self.pop_size < 2 {
            return fail(format!("pop_size must be at least 2, got {}", self.pop_size));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return fail(format!("p must lie in (0, 1), got {}", self.p));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return fail(format!("beta must be positive, got {}", self.beta));
        }
        if !(self.w > 0.0 && self.w.is_finite()) {
            return fail(format!("w must be positive, got {}", self.w));
        }
        if !(self.theta_min.is_finite() && self.theta_max.is_finite() && self.theta_min < self.theta_max) {
            return fail(format!(
                "theta_min ({}) must be below theta_max ({})",
                self.theta_min, self.theta_max
            ));
        }
        if self.schedule_horizon == Some(0) {
            return fail("schedule_horizon must be positive".into());
        }
        if self.max_evals < self.init_cost() {
            return fail(format!(
                "max_evals {} is below the initialization cost {}",
                self.max_evals,
                self.init_cost()
            ));
        }
        Ok(())
    }

    /// Objective calls spent before the first iteration: N, or 2N with opposition.
    pub fn init_cost(&self) -> usize {
        if self.enable_obl {
            2 * self.pop_size
        } else {
            self.pop_size
        }
    }

    /// Objective calls per iteration: 2N, or 3N with the rotation gate.
    pub fn evals_per_iteration(&self) -> usize {
        if self.enable_qrg {
            3 * self.pop_size
        } else {
            2 * self.pop_size
        }
    }

    /// Full iterations the evaluation budget pays for.
    pub fn budget_iterations(&self) -> usize {
        self.max_evals.saturating_sub(self.init_cost()) / self.evals_per_iteration()
    }

    /// Max_Iter of the C schedule: the horizon when set, else the budget iterations.
    pub fn max_iter(&self) -> usize {
        self.schedule_horizon.unwrap_or_else(|| self.budget_iterations())
    }

    /// Iterations actually run.
    pub fn iterations(&self) -> usize {
        self.max_iter().min(self.budget_iterations())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_agto_settings() {
        let cfg = OptimizerConfig::default();
        assert_eq!(cfg.p, 0.03);
        assert_eq!(cfg.beta, 3.0);
        assert_eq!(cfg.w, 0.8);
        assert_eq!(cfg.theta_min, 0.001 * PI);
        assert_eq!(cfg.theta_max, 0.035 * PI);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn iteration_budget() {
        let cfg = OptimizerConfig::default();
        // (15000 - 60) / 90
        assert_eq!(cfg.max_iter(), 166);
        // (15000 - 30) / 60
        assert_eq!(OptimizerConfig::gto().max_iter(), 249);
        assert_eq!(cfg.iterations(), 166);
    }

    #[test]
    fn horizon_decouples_schedule_from_budget() {
        let cfg = OptimizerConfig { schedule_horizon: Some(100), max_evals: 960, ..Default::default() };
        assert_eq!((cfg.max_iter(), cfg.budget_iterations(), cfg.iterations()), (100, 10, 10));
        let cfg = OptimizerConfig { schedule_horizon: Some(5), ..Default::default() };
        assert_eq!(cfg.iterations(), 5);
        assert!(OptimizerConfig { schedule_horizon: Some(0), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = [
            OptimizerConfig { pop_size: 1, ..Default::default() },
            OptimizerConfig { p: 0.0, ..Default::default() },
            OptimizerConfig { p: 1.0, ..Default::default() },
            OptimizerConfig { theta_min: 0.1, theta_max: 0.1, ..Default::default() },
            OptimizerConfig { max_evals: 59, ..Default::default() },
            OptimizerConfig { beta: 0.0, ..Default::default() },
            OptimizerConfig { w: f64::NAN, ..Default::default() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(OptimizeError::Config(_))), "{cfg:?}");
        }
        assert!(OptimizerConfig { max_evals: 60, ..Default::default() }.validate().is_ok());
    }
}
