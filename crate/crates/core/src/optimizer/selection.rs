use super::{BudgetStatus, Evaluator, Objective};
use crate::error::OptimizeError;
use crate::space::{Individual, Population};
use crate::RunRng;

/// Evaluates every unevaluated member of `pop` in order until the budget runs out.
pub fn evaluate_population<O: Objective + ?Sized>(
    pop: &mut Population,
    evaluator: &mut Evaluator<'_, O>,
    rng: &mut RunRng,
) -> Result<BudgetStatus, OptimizeError> {
    let mut members = std::mem::replace(pop, Population::from_members(Vec::new())).into_members();
    let mut status = BudgetStatus::Available;
    for m in members.iter_mut().filter(|m| !m.is_evaluated()) {
        match evaluator.evaluate(&m.position, rng)? {
            Some(f) => m.fitness = f,
            None => {
                status = BudgetStatus::Exhausted;
                break;
            }
        }
    }
    *pop = Population::from_members(members);
    Ok(status)
}

/// Member-wise replacement: candidate `i` replaces incumbent `i` when its
/// fitness is strictly lower.
///
/// Candidates are evaluated here. When the budget runs out, the remaining
/// slots keep their incumbents and [`BudgetStatus::Exhausted`] is returned.
pub fn greedy_select<O: Objective + ?Sized>(
    incumbents: &Population,
    candidates: &mut Population,
    evaluator: &mut Evaluator<'_, O>,
    rng: &mut RunRng,
) -> Result<(Population, BudgetStatus), OptimizeError> {
    if incumbents.len() != candidates.len() {
        return Err(OptimizeError::Precondition(format!(
            "greedy selection needs equal sizes, got {} and {}",
            incumbents.len(),
            candidates.len()
        )));
    }
    let status = evaluate_population(candidates, evaluator, rng)?;
    let members = incumbents
        .members()
        .iter()
        .zip(candidates.members())
        .map(|(inc, cand)| if cand.is_evaluated() && cand.fitness < inc.fitness { cand.clone() } else { inc.clone() })
        .collect();
    Ok((Population::from_members(members), status))
}

/// Keeps the best `pop.len()` members of the union of two evaluated populations.
///
/// Ranking is by fitness with ties going to the earlier member, `pop` before
/// `mutated`. Survivors keep their union order, so an all-worse `mutated`
/// returns `pop` unchanged.
pub fn pool_select(pop: &Population, mutated: &Population) -> Result<Population, OptimizeError> {
    if pop.len() != mutated.len() {
        return Err(OptimizeError::Precondition(format!(
            "pool selection needs equal sizes, got {} and {}",
            pop.len(),
            mutated.len()
        )));
    }
    if !pop.is_evaluated() || !mutated.is_evaluated() {
        return Err(OptimizeError::Precondition("pool selection needs evaluated populations".into()));
    }
    let union: Vec<&Individual> = pop.members().iter().chain(mutated.members()).collect();
    let mut order: Vec<usize> = (0..union.len()).collect();
    order.sort_by(|&a, &b| union[a].fitness.total_cmp(&union[b].fitness).then(a.cmp(&b)));
    let mut keep = vec![false; union.len()];
    for &i in &order[..pop.len()] {
        keep[i] = true;
    }
    let members = union.into_iter().zip(keep).filter(|(_, k)| *k).map(|(m, _)| m.clone()).collect();
    Ok(Population::from_members(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn pop(fits: &[f64]) -> Population {
        Population::from_members(fits.iter().map(|&f| Individual::new(vec![f], f)).collect())
    }

    fn fits(p: &Population) -> Vec<f64> {
        p.members().iter().map(|m| m.fitness).collect()
    }

    #[test]
    fn pool_select_cases() {
        assert_eq!(pool_select(&pop(&[1.0, 2.0]), &pop(&[3.0, 4.0])).unwrap(), pop(&[1.0, 2.0]));
        assert_eq!(pool_select(&pop(&[3.0, 4.0]), &pop(&[1.0, 2.0])).unwrap(), pop(&[1.0, 2.0]));
        assert_eq!(fits(&pool_select(&pop(&[1.0, 4.0]), &pop(&[2.0, 3.0])).unwrap()), vec![1.0, 2.0]);
    }

    #[test]
    fn pool_select_ties_prefer_incumbents() {
        let a = Population::from_members(vec![Individual::new(vec![0.0], 1.0), Individual::new(vec![1.0], 5.0)]);
        let b = Population::from_members(vec![Individual::new(vec![9.0], 1.0), Individual::new(vec![8.0], 7.0)]);
        let out = pool_select(&a, &b).unwrap();
        assert_eq!(out.members()[0].position, vec![0.0]);
        assert_eq!(out.members()[1].position, vec![9.0]);
    }

    #[test]
    fn greedy_select_cases() {
        let mut square = |x: &[f64]| x[0] * x[0];
        let mut rng = seeded_rng(0);

        let inc = Population::from_members(vec![Individual::new(vec![1.0], 1.0), Individual::new(vec![2.0], 4.0)]);
        let mut worse = Population::from_positions(vec![vec![3.0], vec![-5.0]]);
        let mut ev = Evaluator::new(&mut square, 100);
        let (out, status) = greedy_select(&inc, &mut worse, &mut ev, &mut rng).unwrap();
        assert_eq!(out, inc);
        assert_eq!(status, BudgetStatus::Available);

        let mut better = Population::from_positions(vec![vec![0.5], vec![1.0]]);
        let (out, _) = greedy_select(&inc, &mut better, &mut ev, &mut rng).unwrap();
        assert_eq!(out, better);

        // incumbent 2 vs candidate 1 under x^2
        let single = Population::from_members(vec![Individual::new(vec![2.0], 4.0)]);
        let mut cand = Population::from_positions(vec![vec![1.0]]);
        let (out, _) = greedy_select(&single, &mut cand, &mut ev, &mut rng).unwrap();
        assert_eq!(out.members()[0].position, vec![1.0]);
        assert_eq!(ev.used(), 5);
    }

    #[test]
    fn greedy_select_stops_at_budget() {
        let mut calls = 0usize;
        let mut counting = |x: &[f64]| {
            calls += 1;
            x[0].abs()
        };
        let mut rng = seeded_rng(0);
        let inc = pop(&[5.0, 5.0, 5.0]);
        let mut cand = Population::from_positions(vec![vec![1.0], vec![1.0], vec![1.0]]);
        let mut ev = Evaluator::new(&mut counting, 2);
        let (out, status) = greedy_select(&inc, &mut cand, &mut ev, &mut rng).unwrap();
        assert_eq!(status, BudgetStatus::Exhausted);
        assert_eq!(fits(&out), vec![1.0, 1.0, 5.0]);
        assert_eq!(ev.used(), 2);
        drop(ev);
        assert_eq!(calls, 2);
    }
}
