use crate::error::OptimizeError;
use rand::Rng;

/// Axis-aligned feasible box `lower[j] <= x[j] <= upper[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, OptimizeError> {
        if lower.is_empty() {
            return Err(OptimizeError::Config("search space needs at least one dimension".into()));
        }
        if lower.len() != upper.len() {
            return Err(OptimizeError::Dimension { expected: lower.len(), got: upper.len() });
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(OptimizeError::Config(format!("dimension {j} has a non-finite bound")));
            }
            if lo >= hi {
                return Err(OptimizeError::Config(format!(
                    "dimension {j}: lower bound {lo} is not below upper bound {hi}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Same `[lower, upper]` interval on every one of `dims` dimensions.
    pub fn uniform(dims: usize, lower: f64, upper: f64) -> Result<Self, OptimizeError> {
        Self::new(vec![lower; dims], vec![upper; dims])
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dims()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Projects every component of `x` onto its interval.
    pub fn clamp(&self, x: &mut [f64]) {
        for (v, (lo, hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.clamp(*lo, *hi);
        }
    }

    /// `lower + (upper - lower) * r` componentwise, with `r` in `[0, 1]`.
    pub fn point_at(&self, r: &[f64]) -> Vec<f64> {
        r.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(r, (lo, hi))| (hi - lo) * r + lo)
            .collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let r: Vec<f64> = (0..self.dims()).map(|_| rng.random::<f64>()).collect();
        let mut x = self.point_at(&r);
        // (hi - lo) * r + lo can round one ulp past hi
        self.clamp(&mut x);
        x
    }
}

/// A position with its cached objective value. Unevaluated members carry NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub position: Vec<f64>,
    pub fitness: f64,
}

impl Individual {
    pub fn unevaluated(position: Vec<f64>) -> Self {
        Self { position, fitness: f64::NAN }
    }

    pub fn new(position: Vec<f64>, fitness: f64) -> Self {
        Self { position, fitness }
    }

    pub fn is_evaluated(&self) -> bool {
        !self.fitness.is_nan()
    }
}

/// Ordered troop of individuals plus the index of the silverback (lowest fitness).
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Individual>,
    best_index: usize,
}

impl Population {
    pub fn from_members(members: Vec<Individual>) -> Self {
        let mut pop = Self { members, best_index: 0 };
        pop.refresh_best();
        pop
    }

    pub fn from_positions(positions: Vec<Vec<f64>>) -> Self {
        Self::from_members(positions.into_iter().map(Individual::unevaluated).collect())
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    /// The silverback. Only meaningful once the population has been evaluated.
    pub fn best(&self) -> &Individual {
        &self.members[self.best_index]
    }

    pub fn worst_fitness(&self) -> f64 {
        self.members.iter().map(|m| m.fitness).filter(|f| !f.is_nan()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean_fitness(&self) -> f64 {
        self.members.iter().map(|m| m.fitness).sum::<f64>() / self.members.len() as f64
    }

    pub fn is_evaluated(&self) -> bool {
        self.members.iter().all(Individual::is_evaluated)
    }

    /// Componentwise mean of the member positions.
    pub fn mean_position(&self) -> Vec<f64> {
        mean_position(self.members.iter().map(|m| m.position.as_slice()))
    }

    /// Recomputes `best_index`; the first member wins ties and unevaluated members are skipped.
    pub fn refresh_best(&mut self) {
        let mut best = 0;
        let mut best_fit = f64::INFINITY;
        for (i, m) in self.members.iter().enumerate() {
            if m.fitness < best_fit {
                best_fit = m.fitness;
                best = i;
            }
        }
        self.best_index = best;
    }
}

pub(crate) fn mean_position<'a>(positions: impl IntoIterator<Item = &'a [f64]>) -> Vec<f64> {
    let mut sum: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for p in positions {
        if sum.is_empty() {
            sum = vec![0.0; p.len()];
        }
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
        count += 1;
    }
    if count > 0 {
        for s in &mut sum {
            *s /= count as f64;
        }
    }
    sum
}
