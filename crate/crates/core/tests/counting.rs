//! Configuration counts and entropies checked against independent oracles.

use bose_lex_core::combinatorics::{
    count_configurations_exact, count_total_exact, enumerate_configurations, ln_count,
    ln_count_lgamma, ln_count_total, stirling_entropy, stirling_entropy_counts,
};
use bose_lex_core::entropy::{
    boltzmann_limit_entropy, compare_entropies, shannon_entropy, specific_entropy,
    SpecificEntropyInput,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// ln C(n+g-1, n) as a sum of logs of ratios, no gamma function involved.
fn ln_binomial_by_sum(n: u64, g: u64) -> f64 {
    let top = n + g - 1;
    let k = n.min(g - 1);
    (1..=k).map(|j| ((top - k + j) as f64 / j as f64).ln()).sum()
}

/// Counts g-tuples summing to n by recursion on the first slot.
fn count_by_recursion(n: u64, g: u64) -> u64 {
    if g == 1 {
        return 1;
    }
    (0..=n).map(|first| count_by_recursion(n - first, g - 1)).sum()
}

#[test]
fn enumeration_matches_closed_form() {
    for total in 1..=14u64 {
        for g in 1..=total {
            let n = total - g;
            let tuples = enumerate_configurations(n, g).unwrap();
            let count = count_configurations_exact(n, g).unwrap();
            assert_eq!(count, tuples.len() as u64, "N={n} G={g}");
            assert_eq!(count, count_by_recursion(n, g));
            assert!(tuples.iter().all(|t| t.len() == g as usize && t.iter().sum::<u64>() == n));
            assert!(tuples.windows(2).all(|w| w[0] < w[1]), "sorted and duplicate-free");
        }
    }
}

#[test]
fn ln_count_of_large_class() {
    let v = ln_count_total(&[(1000, 1000)]).unwrap();
    let oracle = ln_binomial_by_sum(1000, 1000);
    assert!((v - oracle).abs() < 1e-9 * oracle);
    // frozen from an arbitrary-precision evaluation of ln C(1999, 1000)
    assert!((v - 1381.57484635692).abs() < 1e-8);
}

#[test]
fn exact_and_lgamma_paths_agree() {
    for n in 0..=63u64 {
        for g in 1..=(64 - n) {
            let exact = count_configurations_exact(n, g).unwrap().value().to_f64().unwrap().ln();
            let lg = ln_count_lgamma(n, g);
            assert!((exact - lg).abs() <= 1e-12 * exact.max(1.0), "N={n} G={g}: {exact} vs {lg}");
            assert_eq!(ln_count(n, g).unwrap(), exact);
        }
    }
}

#[test]
fn product_of_counts() {
    let stats = [(3, 4), (0, 2), (10, 1), (7, 7)];
    let product = count_total_exact(&stats).unwrap();
    let by_hand: u64 = stats
        .iter()
        .map(|&(n, g)| count_by_recursion(n, g))
        .product();
    assert_eq!(product, by_hand);
    assert!((product.ln() - ln_count_total(&stats).unwrap()).abs() < 1e-12 * product.ln());
}

#[test]
fn stirling_relative_error_shrinks() {
    let mut previous = f64::INFINITY;
    for k in 1..=6 {
        let n = 10u64.pow(k);
        let exact = ln_count_total(&[(n, n)]).unwrap();
        let oracle = ln_binomial_by_sum(n, n);
        assert!((exact - oracle).abs() < 1e-9 * oracle);
        let approx = stirling_entropy_counts(&[(n, n)]);
        let rel = (approx - exact).abs() / exact;
        assert!(rel < previous, "k={k}: {rel} >= {previous}");
        if k == 3 {
            assert!(rel < 5e-3);
        }
        previous = rel;
    }
}

#[test]
fn specific_entropy_is_per_token_stirling_entropy() {
    let base = [(3u64, 5u64), (8, 2), (1, 9), (13, 13)];
    let input = SpecificEntropyInput::from_counts(&base).unwrap();
    let specific = specific_entropy(&input);
    for m in [1u64, 10, 100, 1000] {
        let scaled: Vec<(u64, u64)> = base.iter().map(|&(a, b)| (m * a, m * b)).collect();
        let tokens: u64 = scaled.iter().map(|s| s.0).sum();
        let per_token = stirling_entropy_counts(&scaled) / tokens as f64;
        assert!((per_token - specific).abs() < 1e-12 * specific, "m={m}");
    }
    // single class at occupancy 1: 2 ln 2 per token either way
    let one = SpecificEntropyInput::from_counts(&[(7, 7)]).unwrap();
    assert!((specific_entropy(&one) - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
}

#[test]
fn sparse_classes_reach_boltzmann_limit() {
    let stats = [(1u64, 100_000u64), (40, 4_000_000), (7, 1_000_000), (2, 1_000_000)];
    let cmp = compare_entropies(&stats).unwrap();
    assert!(cmp.max_occupancy <= 1e-5);
    assert!((cmp.be_total - cmp.boltzmann_limit).abs() / cmp.be_total < 1e-4);
}

proptest! {
    #[test]
    fn product_law(stats in prop::collection::vec((0u64..5000, 1u64..5000), 1..8)) {
        let total = ln_count_total(&stats).unwrap();
        let parts: f64 = stats.iter().map(|&s| ln_count_total(&[s]).unwrap()).sum();
        prop_assert!((total - parts).abs() <= 1e-12 * total.max(1.0));
    }

    #[test]
    fn stirling_increases_in_usage_and_size(n in 1u64..10_000, g in 1u64..10_000) {
        let s = stirling_entropy_counts(&[(n, g)]);
        prop_assert!(stirling_entropy_counts(&[(n + 1, g)]) > s);
        prop_assert!(stirling_entropy_counts(&[(n, g + 1)]) > s);
    }

    #[test]
    fn specific_entropy_nonnegative(
        raw in prop::collection::vec((0.0f64..1.0, 0.001f64..1.0), 1..10),
        rho in 0.01f64..100.0,
    ) {
        let ps: f64 = raw.iter().map(|r| r.0).sum();
        let gs: f64 = raw.iter().map(|r| r.1).sum();
        prop_assume!(ps > 0.0);
        let p = raw.iter().map(|r| r.0 / ps).collect();
        let g = raw.iter().map(|r| r.1 / gs).collect();
        let input = SpecificEntropyInput::new(p, g, rho).unwrap();
        prop_assert!(specific_entropy(&input) >= 0.0);
    }

    #[test]
    fn shannon_bounded_by_log_length(raw in prop::collection::vec(0.0f64..1.0, 1..20)) {
        let sum: f64 = raw.iter().sum();
        prop_assume!(sum > 0.0);
        let p: Vec<f64> = raw.iter().map(|x| x / sum).collect();
        let h = shannon_entropy(&p).unwrap();
        prop_assert!(h <= (p.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn small_occupancy_limit(
        usage in prop::collection::vec(1u32..100, 1..6),
        scale in 1e5f64..1e7,
    ) {
        let stats: Vec<(f64, f64)> = usage
            .iter()
            .enumerate()
            .map(|(i, &n)| (n as f64, (n as f64 * scale * (1.0 + i as f64)).ceil()))
            .collect();
        let be = stirling_entropy(&stats);
        let limit = boltzmann_limit_entropy(&stats);
        prop_assert!((be - limit).abs() / be < 1e-4);
        prop_assert!(be > limit, "the limit form drops the N n/2 term per class");
    }
}

#[test]
fn shannon_equality_iff_uniform() {
    for k in 1..10usize {
        let p = vec![1.0 / k as f64; k];
        assert!((shannon_entropy(&p).unwrap() - (k as f64).ln()).abs() < 1e-12);
    }
    let skewed = [0.3, 0.3, 0.4];
    assert!(shannon_entropy(&skewed).unwrap() < 3f64.ln() - 1e-6);
}
