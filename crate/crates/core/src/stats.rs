//! Multi-run comparison statistics: Avg/Std summaries, the two-sided
//! Wilcoxon rank-sum test and Friedman-style rank tables.

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("empty sample")]
    Empty,
    #[error("sample needs at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("ragged input: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, got: usize },
    #[error("exact rank-sum distribution is limited to {max} pooled values, got {got}")]
    TooLargeForExact { max: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub avg: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub std: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let n = values.len() as f64;
    let avg = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Ok(Summary { avg, std: 0.0 });
    }
    // deviations are scaled first so tiny samples (1e-200) do not underflow
    let scale = values.iter().map(|v| (v - avg).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Summary { avg, std: 0.0 });
    }
    let ss: f64 = values.iter().map(|v| ((v - avg) / scale).powi(2)).sum();
    Ok(Summary { avg, std: scale * (ss / (n - 1.0)).sqrt() })
}

/// Midranks (1-based, ties share their average rank) of `values`.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share rank ((i + 1) + (j + 1)) / 2
        let r = (i + j + 2) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSumMethod {
    /// Exact when `min(n1, n2) < 10` and `n1 + n2 < 20`, normal approximation otherwise.
    Auto,
    /// Enumerated null distribution of the rank sum (ties included).
    Exact,
    /// Normal approximation with tie and continuity corrections.
    Approximate,
}

/// Largest pooled sample handled by [`RankSumMethod::Exact`].
pub const EXACT_LIMIT: usize = 100;

/// Two-sided Wilcoxon rank-sum p-value, choosing the method automatically.
///
/// Returns NaN when every pooled value is identical, since the two samples
/// cannot be told apart at all.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    wilcoxon_rank_sum_with(a, b, RankSumMethod::Auto)
}

pub fn wilcoxon_rank_sum_with(a: &[f64], b: &[f64], method: RankSumMethod) -> Result<f64, StatsError> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooShort { needed: 2, got: s.len() });
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
    }
    let first = a[0];
    if a.iter().chain(b).all(|&v| v == first) {
        return Ok(f64::NAN);
    }
    let exact = match method {
        RankSumMethod::Exact => true,
        RankSumMethod::Approximate => false,
        RankSumMethod::Auto => a.len().min(b.len()) < 10 && a.len() + b.len() < 20,
    };
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    if exact {
        exact_p(&ranks, a.len())
    } else {
        Ok(approximate_p(&pooled, &ranks, a.len()))
    }
}

fn approximate_p(pooled: &[f64], ranks: &[f64], n1: usize) -> f64 {
    let n = pooled.len() as f64;
    let n1f = n1 as f64;
    let n2f = n - n1f;
    let w: f64 = ranks[..n1].iter().sum();
    let mean = n1f * (n + 1.0) / 2.0;

    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = n1f * n2f / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let d = w - mean;
    let continuity = if d > 0.0 {
        0.5
    } else if d < 0.0 {
        -0.5
    } else {
        0.0
    };
    let z = (d - continuity) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * normal.cdf(-z.abs())).min(1.0)
}

/// Exact two-sided p from the permutation distribution of the first group's
/// rank sum. Ranks are doubled so that midranks become integers.
fn exact_p(ranks: &[f64], n1: usize) -> Result<f64, StatsError> {
    let n = ranks.len();
    if n > EXACT_LIMIT {
        return Err(StatsError::TooLargeForExact { max: EXACT_LIMIT, got: n });
    }
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let observed: usize = doubled[..n1].iter().sum();
    let max_sum: usize = doubled.iter().sum();

    // counts[k][s]: subsets of size k with doubled rank sum s
    let mut counts = vec![vec![0u128; max_sum + 1]; n1 + 1];
    counts[0][0] = 1;
    for &r in &doubled {
        for k in (1..=n1).rev() {
            let (lower, upper) = counts.split_at_mut(k);
            let prev = &lower[k - 1];
            let cur = &mut upper[0];
            for s in (r..=max_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    let dist = &counts[n1];
    let total: u128 = dist.iter().sum();
    let below: u128 = dist[..=observed].iter().sum();
    let above: u128 = dist[observed..].iter().sum();
    let tail = below.min(above) as f64 / total as f64;
    Ok((2.0 * tail).min(1.0))
}

/// Per-function ranks of k algorithms with rank sums and final ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    /// `[function][algorithm]`, dense ranks starting at 1.
    pub per_function_ranks: Vec<Vec<u32>>,
    pub rank_sum: Vec<u32>,
    /// `rank_sum / number of functions`.
    pub average_rank: Vec<f64>,
    /// 1-based position of each algorithm when ordered by average rank,
    /// earlier algorithms first on ties.
    pub final_rank: Vec<usize>,
}

/// Ranks algorithms per function by average result, breaking exact ties on
/// the standard deviation. Remaining ties share a rank and the next distinct
/// result takes the next integer.
pub fn friedman_ranks(avg: &[Vec<f64>], std: &[Vec<f64>]) -> Result<RankTable, StatsError> {
    if avg.is_empty() {
        return Err(StatsError::Empty);
    }
    let k = avg[0].len();
    if k == 0 {
        return Err(StatsError::Empty);
    }
    if std.len() != avg.len() {
        return Err(StatsError::Ragged { row: std.len().min(avg.len()), expected: avg.len(), got: std.len() });
    }
    for (row, (a, s)) in avg.iter().zip(std).enumerate() {
        for r in [a, s] {
            if r.len() != k {
                return Err(StatsError::Ragged { row, expected: k, got: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(StatsError::NonFinite);
            }
        }
    }

    let per_function_ranks: Vec<Vec<u32>> = avg.iter().zip(std).map(|(a, s)| dense_ranks(a, s)).collect();
    let mut rank_sum = vec![0u32; k];
    for row in &per_function_ranks {
        for (sum, r) in rank_sum.iter_mut().zip(row) {
            *sum += r;
        }
    }
    let functions = avg.len() as f64;
    let average_rank: Vec<f64> = rank_sum.iter().map(|&s| s as f64 / functions).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| average_rank[x].total_cmp(&average_rank[y]).then(x.cmp(&y)));
    let mut final_rank = vec![0; k];
    for (pos, &alg) in order.iter().enumerate() {
        final_rank[alg] = pos + 1;
    }
    Ok(RankTable { per_function_ranks, rank_sum, average_rank, final_rank })
}

fn dense_ranks(avg: &[f64], std: &[f64]) -> Vec<u32> {
    let key = |i: usize| (avg[i], std[i]);
    let cmp = |x: (f64, f64), y: (f64, f64)| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1));
    let mut distinct: Vec<(f64, f64)> = (0..avg.len()).map(key).collect();
    distinct.sort_by(|x, y| cmp(*x, *y));
    distinct.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1);
    (0..avg.len())
        .map(|i| {
            let k = key(i);
            distinct.partition_point(|d| cmp(*d, k).is_lt()) as u32 + 1
        })
        .collect()
}
