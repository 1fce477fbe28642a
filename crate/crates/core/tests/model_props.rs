mod common;

use common::{direct_sum, weights};
use ineq_forge::{
    abel_sum, validate_monotone, validate_weights, Admissibility, Direction, SignedWeights,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn accepted_weights_have_nonnegative_prefixes(w in (1..60usize).prop_flat_map(weights)) {
        prop_assert!(w.prefix_sums().iter().all(|&p| p >= 0.0));
        prop_assert_eq!(validate_weights(w.values(), 0.0).unwrap(), Admissibility::Admissible);
    }

    #[test]
    fn construction_agrees_with_validation(values in prop::collection::vec(-3.0..3.0f64, 1..30)) {
        let verdict = validate_weights(&values, 0.0).unwrap();
        prop_assert_eq!(verdict.is_admissible(), SignedWeights::exact(values).is_ok());
    }

    #[test]
    fn abel_matches_direct_sum(
        (w, c) in (1..400usize).prop_flat_map(|n| (weights(n), prop::collection::vec(-1e6..1e6f64, n)))
    ) {
        let abel = abel_sum(&w, &c).unwrap();
        let (direct, direct_scale) = direct_sum(w.values(), &c);
        let scale: f64 = w
            .prefix_sums()
            .iter()
            .zip(c.iter().chain(std::iter::once(&0.0)).collect::<Vec<_>>().windows(2))
            .map(|(p, pair)| (p * (pair[0] - pair[1])).abs())
            .sum::<f64>()
            .max(direct_scale);
        prop_assert!((abel - direct).abs() <= 1e-12 * scale, "{abel} vs {direct}");
    }

    #[test]
    fn constant_values_telescope(w in (1..50usize).prop_flat_map(weights), c in -10.0..10.0f64) {
        let n = w.len();
        let abel = abel_sum(&w, &vec![c; n]).unwrap();
        prop_assert!((abel - c * w.total()).abs() <= 1e-12 * (c * w.total()).abs().max(1e-300));
    }

    #[test]
    fn monotone_check_is_reversal_symmetric(
        values in prop::collection::vec(0.0..5.0f64, 1..12),
        lo in 0.0..1.0f64,
        width in 0.0..5.0f64,
        up in any::<bool>(),
    ) {
        let direction = if up { Direction::NonDecreasing } else { Direction::NonIncreasing };
        let reversed: Vec<f64> = values.iter().rev().copied().collect();
        let hi = lo + width;
        let forward = validate_monotone(&values, direction, lo, hi).unwrap().passed();
        let backward = validate_monotone(&reversed, direction.reversed(), lo, hi).unwrap().passed();
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn concatenation_stays_admissible(
        first in (1..20usize).prop_flat_map(weights),
        second in (1..20usize).prop_flat_map(weights),
    ) {
        let joined = first.concat(&second).unwrap();
        prop_assert!(validate_weights(joined.values(), 0.0).unwrap().is_admissible());
    }
}
