use crate::error::OptimizeError;
use crate::space::{Population, SearchSpace};
use rand::Rng;

/// `n` positions drawn uniformly in the box, unevaluated.
pub fn init_population<R: Rng + ?Sized>(
    space: &SearchSpace,
    n: usize,
    rng: &mut R,
) -> Result<Population, OptimizeError> {
    if n < 2 {
        return Err(OptimizeError::Config(format!("population size must be at least 2, got {n}")));
    }
    Ok(Population::from_positions((0..n).map(|_| space.sample(rng)).collect()))
}

/// Opposite point `lower + upper - x`.
pub fn opposite_point(x: &[f64], space: &SearchSpace) -> Vec<f64> {
    x.iter()
        .zip(space.lower().iter().zip(space.upper()))
        .map(|(v, (lo, hi))| lo + hi - v)
        .collect()
}

/// Opposition population (unevaluated), member by member. Every member must
/// lie inside the box.
pub fn opposition_of(pop: &Population, space: &SearchSpace) -> Result<Population, OptimizeError> {
    let mut out = Vec::with_capacity(pop.len());
    for (i, m) in pop.members().iter().enumerate() {
        if !space.contains(&m.position) {
            return Err(OptimizeError::Precondition(format!("member {i} lies outside the search space")));
        }
        let mut opp = opposite_point(&m.position, space);
        // lo + hi - x may round a hair outside the box when lo + hi is inexact
        space.clamp(&mut opp);
        out.push(opp);
    }
    Ok(Population::from_positions(out))
}
