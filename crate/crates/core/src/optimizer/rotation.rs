//! Quantum rotation gate mutation.
//!
//! Coordinates are paired as (0,1), (2,3), ... and each pair is rotated by a
//! small angle whose magnitude grows with the individual's distance (in
//! fitness) from the silverback and whose sign turns the pair towards the
//! silverback's pair. An odd trailing coordinate is left alone.

use crate::config::OptimizerConfig;
use crate::error::OptimizeError;
use crate::space::{Population, SearchSpace};

/// `gamma = 1 - exp(-4 ((best - f) / (best - worst))^2)`, 0 for a flat population.
pub fn rotation_gamma(fitness: f64, best: f64, worst: f64) -> f64 {
    if best == worst {
        return 0.0;
    }
    let ratio = (best - fitness) / (best - worst);
    let gamma = 1.0 - (-4.0 * ratio * ratio).exp();
    if gamma.is_nan() {
        0.0
    } else {
        gamma
    }
}

/// Angle magnitude `theta_min + gamma (theta_max - theta_min)`.
pub fn rotation_step(gamma: f64, theta_min: f64, theta_max: f64) -> f64 {
    theta_min + gamma * (theta_max - theta_min)
}

/// +1 when the silverback pair lies counter-clockwise of `(a, b)` (or on the
/// same ray), -1 otherwise.
pub fn rotation_direction(a: f64, b: f64, target_a: f64, target_b: f64) -> f64 {
    if a * target_b - b * target_a < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// The 2x2 rotation matrix `[[cos, -sin], [sin, cos]]`.
pub fn rotation_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

pub fn rotate_pair(a: f64, b: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (a * c - b * s, a * s + b * c)
}

/// Rotates every pair of `x` by `step`, each towards the matching pair of `target`.
pub fn rotate_towards(x: &[f64], target: &[f64], step: f64) -> Vec<f64> {
    let mut out = x.to_vec();
    for k in (0..x.len() / 2).map(|k| 2 * k) {
        let (a, b) = (x[k], x[k + 1]);
        let theta = step * rotation_direction(a, b, target[k], target[k + 1]);
        let (ra, rb) = rotate_pair(a, b, theta);
        out[k] = ra;
        out[k + 1] = rb;
    }
    out
}

/// Mutated, clamped and unevaluated copies of every member of `pop`.
///
/// `best_fitness` and `worst_fitness` are the extremes of the current
/// iteration; the population must be fully evaluated.
pub fn qrg_mutate(
    pop: &Population,
    best_fitness: f64,
    worst_fitness: f64,
    cfg: &OptimizerConfig,
    space: &SearchSpace,
) -> Result<Population, OptimizeError> {
    if !pop.is_evaluated() {
        return Err(OptimizeError::Precondition("rotation needs an evaluated population".into()));
    }
    if !(best_fitness <= worst_fitness) {
        return Err(OptimizeError::Precondition(format!(
            "best fitness {best_fitness} exceeds worst fitness {worst_fitness}"
        )));
    }
    let target = &pop.best().position;
    let mutated = pop
        .members()
        .iter()
        .map(|m| {
            let gamma = rotation_gamma(m.fitness, best_fitness, worst_fitness);
            let step = rotation_step(gamma, cfg.theta_min, cfg.theta_max);
            let mut y = rotate_towards(&m.position, target, step);
            space.clamp(&mut y);
            y
        })
        .collect();
    Ok(Population::from_positions(mutated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Individual;
    use std::f64::consts::PI;

    #[test]
    fn identity_at_zero_angle() {
        let x = [1.25, -3.5, 7.0];
        assert_eq!(rotate_towards(&x, &[0.0, 1.0, 0.0], 0.0), x.to_vec());
    }

    #[test]
    fn quarter_turn() {
        let (a, b) = rotate_pair(1.0, 0.0, PI / 2.0);
        assert!(a.abs() < 1e-15);
        assert!((b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gamma_and_step_closed_forms() {
        let (tmin, tmax) = (0.001 * PI, 0.035 * PI);
        let g0 = rotation_gamma(2.0, 2.0, 10.0);
        assert_eq!(g0, 0.0);
        assert_eq!(rotation_step(g0, tmin, tmax), 0.001 * PI);

        let g1 = rotation_gamma(10.0, 2.0, 10.0);
        assert!((g1 - 0.981_684_4).abs() < 1e-7);
        assert_eq!(g1, 1.0 - (-4.0f64).exp());
        let expected = 0.001 * PI + 0.981_684_361_1 * 0.034 * PI;
        assert!((rotation_step(g1, tmin, tmax) - expected).abs() < 1e-10);
    }

    #[test]
    fn flat_population_gets_minimum_rotation() {
        assert_eq!(rotation_gamma(5.0, 5.0, 5.0), 0.0);
    }

    #[test]
    fn direction_turns_towards_target() {
        // target at +90 degrees from (1, 0): counter-clockwise
        assert_eq!(rotation_direction(1.0, 0.0, 0.0, 1.0), 1.0);
        assert_eq!(rotation_direction(1.0, 0.0, 0.0, -1.0), -1.0);
        assert_eq!(rotation_direction(1.0, 1.0, 2.0, 2.0), 1.0);
        let y = rotate_towards(&[1.0, 0.0], &[0.0, -1.0], 0.1);
        assert!(y[1] < 0.0);
    }

    #[test]
    fn odd_dimension_passes_through() {
        let y = rotate_towards(&[1.0, 0.0, 42.0], &[0.0, 1.0, -3.0], 0.3);
        assert_eq!(y[2], 42.0);
    }

    #[test]
    fn mutation_leaves_input_untouched_and_clamps() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let pop = Population::from_members(vec![
            Individual::new(vec![0.0, 1.0], 0.0),
            Individual::new(vec![1.0, 1.0], 3.0),
        ]);
        let before = pop.clone();
        let cfg = OptimizerConfig::default();
        let out = qrg_mutate(&pop, 0.0, 3.0, &cfg, &space).unwrap();
        assert_eq!(pop, before);
        assert_eq!(out.len(), 2);
        assert!(out.members().iter().all(|m| space.contains(&m.position) && !m.is_evaluated()));
    }

    #[test]
    fn mutation_preconditions() {
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let cfg = OptimizerConfig::default();
        let unevaluated = Population::from_positions(vec![vec![0.0, 0.0], vec![0.5, 0.5]]);
        assert!(qrg_mutate(&unevaluated, 0.0, 1.0, &cfg, &space).is_err());
        let pop = Population::from_members(vec![Individual::new(vec![0.0, 0.0], 1.0)]);
        assert!(qrg_mutate(&pop, 2.0, 1.0, &cfg, &space).is_err());
    }
}
