use agto_core::seeded_rng;
use agto_core::stats::{
    friedman_ranks, midranks, summarize, wilcoxon_rank_sum, wilcoxon_rank_sum_with, RankSumMethod,
};
use proptest::prelude::*;
use rand::Rng;

/// Two-sided p by listing every way to pick `a.len()` of the pooled ranks.
fn enumerated_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let n = pooled.len();
    let k = a.len();
    let observed: f64 = ranks[..k].iter().sum();
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let w: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        total += 1;
        if w <= observed + 1e-9 {
            le += 1;
        }
        if w >= observed - 1e-9 {
            ge += 1;
        }
    }
    (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
}

fn small_sample(rng: &mut impl Rng) -> Vec<f64> {
    let n = rng.random_range(2..=5);
    // coarse values so ties occur often
    (0..n).map(|_| rng.random_range(0..6) as f64).collect()
}

#[test]
fn small_samples_agree_with_enumeration() {
    let mut rng = seeded_rng(200);
    let mut compared = 0;
    while compared < 200 {
        let a = small_sample(&mut rng);
        let b = small_sample(&mut rng);
        let p = wilcoxon_rank_sum(&a, &b).unwrap();
        if p.is_nan() {
            continue;
        }
        let oracle = enumerated_p(&a, &b);
        assert!((p - oracle).abs() <= 0.02, "{a:?} {b:?}: {p} vs {oracle}");
        compared += 1;
    }
}

#[test]
fn exact_method_matches_enumeration_to_rounding() {
    let mut rng = seeded_rng(201);
    for _ in 0..300 {
        let a: Vec<f64> = (0..rng.random_range(2..=7)).map(|_| rng.random_range(0..9) as f64).collect();
        let b: Vec<f64> = (0..rng.random_range(2..=7)).map(|_| rng.random_range(0..9) as f64).collect();
        let p = wilcoxon_rank_sum_with(&a, &b, RankSumMethod::Exact).unwrap();
        if p.is_nan() {
            continue;
        }
        assert!((p - enumerated_p(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn approximation_tracks_enumeration_at_moderate_sizes() {
    let mut rng = seeded_rng(202);
    for _ in 0..50 {
        let a: Vec<f64> = (0..9).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..9).map(|_| rng.random::<f64>() + 0.2).collect();
        let p = wilcoxon_rank_sum_with(&a, &b, RankSumMethod::Approximate).unwrap();
        assert!((p - enumerated_p(&a, &b)).abs() < 0.02);
    }
}

#[test]
fn identical_samples_are_nan() {
    assert!(wilcoxon_rank_sum(&[0.0; 30], &[0.0; 30]).unwrap().is_nan());
    assert!(wilcoxon_rank_sum(&[2.5, 2.5], &[2.5, 2.5, 2.5]).unwrap().is_nan());
}

proptest! {
    #[test]
    fn rank_sum_is_symmetric_and_bounded(
        a in prop::collection::vec(-5i32..5, 2..40),
        b in prop::collection::vec(-5i32..5, 2..40),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let p = wilcoxon_rank_sum(&a, &b).unwrap();
        let q = wilcoxon_rank_sum(&b, &a).unwrap();
        prop_assert!(p.is_nan() && q.is_nan() || p.to_bits() == q.to_bits());
        prop_assert!(p.is_nan() || (0.0..=1.0).contains(&p));
    }

    #[test]
    fn friedman_ranks_ignore_monotone_transforms(
        rows in prop::collection::vec(prop::collection::vec(-50i32..50, 4), 1..6),
    ) {
        let avg: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect();
        let std: Vec<Vec<f64>> = avg.iter().map(|r| r.iter().map(|v| v.abs()).collect()).collect();
        let warped: Vec<Vec<f64>> = avg.iter().map(|r| r.iter().map(|v| (v / 10.0).exp() * 3.0 - 1.0).collect()).collect();
        let base = friedman_ranks(&avg, &std).unwrap();
        let moved = friedman_ranks(&warped, &std).unwrap();
        prop_assert_eq!(base.per_function_ranks, moved.per_function_ranks);
    }

    #[test]
    fn summary_moves_with_translation(xs in prop::collection::vec(-1e3f64..1e3, 1..50), t in -1e3f64..1e3) {
        let s = summarize(&xs).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + t).collect();
        let u = summarize(&shifted).unwrap();
        prop_assert!((u.avg - (s.avg + t)).abs() <= 1e-9);
        prop_assert!((u.std - s.std).abs() <= 1e-9);
    }
}
