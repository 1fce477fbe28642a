#![allow(dead_code)]

use ineq_forge::search::from_prefix;
use ineq_forge::{BoundedMonotoneSeq, Direction, SignedWeights, WeightedInstance};
use proptest::prelude::*;

/// Admissible weights of length `n`, drawn through their partial sums so that
/// sign changes, zero prefixes and large cancellations all occur.
pub fn weights(n: usize) -> impl Strategy<Value = SignedWeights> {
    let prefix = prop_oneof![
        3 => 0.0..1.0f64,
        1 => Just(0.0),
        1 => 0.0..1e3f64,
    ];
    prop::collection::vec(prefix, n).prop_map(|mut p| {
        if p.iter().all(|&v| v == 0.0) {
            p[0] = 1.0;
        }
        from_prefix(&p).unwrap()
    })
}

/// Non-negative weights (the classical case).
pub fn classical_weights(n: usize) -> impl Strategy<Value = SignedWeights> {
    prop::collection::vec(0.0..1.0f64, n).prop_map(|v| SignedWeights::exact(v).unwrap())
}

fn descending(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Non-increasing sequence with values in `[lo, hi]`, bounds declared tight.
pub fn decreasing(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = BoundedMonotoneSeq> {
    prop::collection::vec(lo..=hi, n)
        .prop_map(|v| BoundedMonotoneSeq::tight(descending(v), Direction::NonIncreasing).unwrap())
}

/// Non-increasing with some entries exactly zero (Minkowski allows them).
pub fn decreasing_with_zeros(n: usize) -> impl Strategy<Value = BoundedMonotoneSeq> {
    (prop::collection::vec(0.0..=10.0f64, n), 0..=n).prop_map(move |(v, zeros)| {
        let mut v = descending(v);
        for x in v.iter_mut().rev().take(zeros) {
            *x = 0.0;
        }
        BoundedMonotoneSeq::tight(v, Direction::NonIncreasing).unwrap()
    })
}

/// Instance with both sequences positive and non-increasing, `n` in `1..=max_n`.
pub fn positive_instance(max_n: usize) -> impl Strategy<Value = WeightedInstance> {
    (1..=max_n).prop_flat_map(|n| {
        (
            weights(n),
            decreasing(n, 0.01, 10.0),
            decreasing(n, 0.01, 10.0),
        )
            .prop_map(|(w, a, b)| WeightedInstance::new(w, a, b).unwrap())
    })
}

/// Instance with non-negative non-increasing sequences, zeros allowed.
pub fn nonnegative_instance(max_n: usize) -> impl Strategy<Value = WeightedInstance> {
    (1..=max_n).prop_flat_map(|n| {
        (
            weights(n),
            decreasing_with_zeros(n),
            decreasing_with_zeros(n),
        )
            .prop_map(|(w, a, b)| WeightedInstance::new(w, a, b).unwrap())
    })
}

/// Instance satisfying the monotone-ratio hypothesis: `b` non-increasing and
/// `a = r b` with `r` non-increasing, or `b = a / r` with `r` non-decreasing.
pub fn cauchy_instance(max_n: usize) -> impl Strategy<Value = WeightedInstance> {
    (1..=max_n).prop_flat_map(|n| {
        (
            weights(n),
            prop::collection::vec(0.1..=10.0f64, n),
            prop::collection::vec(0.1..=10.0f64, n),
            any::<bool>(),
        )
            .prop_map(|(w, base, r, increasing_ratio)| {
                let base = descending(base);
                let mut r = descending(r);
                let (a, b) = if increasing_ratio {
                    r.reverse();
                    let b = base.iter().zip(&r).map(|(x, r)| x / r).collect::<Vec<_>>();
                    (base, b)
                } else {
                    let a = base.iter().zip(&r).map(|(x, r)| x * r).collect::<Vec<_>>();
                    (a, base)
                };
                let seq =
                    |v: Vec<f64>| BoundedMonotoneSeq::tight(v, Direction::NonIncreasing).unwrap();
                WeightedInstance::new(w, seq(a), seq(b)).unwrap()
            })
    })
}

pub fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![
        Just(1.1),
        Just(1.5),
        Just(2.0),
        Just(4.0),
        Just(16.0),
        1.01..10.0f64
    ]
}

/// Direct compensated `Σ p_k c_k`, the oracle for summation by parts.
pub fn direct_sum(weights: &[f64], values: &[f64]) -> (f64, f64) {
    let terms: Vec<f64> = weights.iter().zip(values).map(|(p, c)| p * c).collect();
    (
        ineq_forge::sum::sum(terms.iter().copied()),
        terms.iter().map(|t| t.abs()).sum(),
    )
}
