use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_weights, BoundedMonotoneSeq, Direction, SignedWeights};
use crate::sum::{self, CompensatedSum};

/// Pool-adjacent-violators: Euclidean projection onto non-decreasing sequences.
fn pava_non_decreasing(values: &[f64]) -> Vec<f64> {
    // (sum, count) per pooled block
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        let mut block = (v, 1usize);
        while let Some(&(s, c)) = blocks.last() {
            if s / c as f64 > block.0 / block.1 as f64 {
                blocks.pop();
                block = (s + block.0, c + block.1);
            } else {
                break;
            }
        }
        blocks.push(block);
    }
    blocks
        .into_iter()
        .flat_map(|(s, c)| std::iter::repeat_n(s / c as f64, c))
        .collect()
}

/// Nearest sequence (in the Euclidean sense) that is monotone in `direction`
/// and lies in `[lo, hi]`: isotonic regression by pool-adjacent-violators,
/// then clipping, which preserves both monotonicity and optimality for a box
/// that is the same in every coordinate. Idempotent.
pub fn project_monotone(
    values: &[f64],
    direction: Direction,
    lo: f64,
    hi: f64,
) -> Result<BoundedMonotoneSeq> {
    if !(lo <= hi) {
        return Err(Error::Parameter(format!("bounds [{lo}, {hi}] are empty")));
    }
    if values.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: i + 1 });
    }
    let fitted = match direction {
        Direction::NonDecreasing => pava_non_decreasing(values),
        Direction::NonIncreasing => {
            let reversed: Vec<f64> = values.iter().rev().copied().collect();
            let mut out = pava_non_decreasing(&reversed);
            out.reverse();
            out
        }
    };
    let clipped = fitted.into_iter().map(|v| v.clamp(lo, hi)).collect();
    BoundedMonotoneSeq::new(clipped, direction, lo, hi)
}

/// How [`project_weights`] repairs negative partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRepair {
    /// Clip every partial sum at zero and difference back.
    ClipPrefix,
    /// Shrink all negative weights by the largest common factor in `[0, 1]`
    /// that makes the smallest partial sum zero.
    RescaleNegative,
}

/// Maps arbitrary finite weights to admissible ones (checked at tolerance 0).
/// Admissible input is returned unchanged.
pub fn project_weights(values: &[f64], mode: WeightRepair) -> Result<SignedWeights> {
    if validate_weights(values, 0.0)?.is_admissible() {
        return nonzero(values.to_vec());
    }
    match mode {
        WeightRepair::ClipPrefix => {
            let clipped: Vec<f64> = sum::cumulative(values)
                .into_iter()
                .map(|p| p.max(0.0))
                .collect();
            from_prefix(&clipped)
        }
        WeightRepair::RescaleNegative => rescale_negative(values),
    }
}

/// Weights whose partial sums are `prefix` (all `>= 0`), snapped to a dyadic
/// grid fine enough to lose at most one ulp of the largest prefix. On that
/// grid differencing and re-summation are exact, so the result is admissible
/// at tolerance 0.
pub fn from_prefix(prefix: &[f64]) -> Result<SignedWeights> {
    if prefix.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(i) = prefix.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::Parameter(format!(
            "prefix {} = {} must be finite and non-negative",
            i + 1,
            prefix[i]
        )));
    }
    let top = prefix.iter().fold(0.0f64, |m, &p| m.max(p));
    if top == 0.0 {
        return Err(Error::Degenerate("all weights are zero".into()));
    }
    let unit = 2f64.powi(top.log2().ceil() as i32 - 52);
    let mut previous = 0.0;
    let weights = prefix
        .iter()
        .map(|&p| {
            let snapped = (p / unit).round() * unit;
            let w = snapped - previous;
            previous = snapped;
            w
        })
        .collect();
    SignedWeights::exact(weights)
}

fn rescale_negative(values: &[f64]) -> Result<SignedWeights> {
    let mut pos = CompensatedSum::new();
    let mut neg = CompensatedSum::new();
    let mut factor = 1.0f64;
    for &v in values {
        if v >= 0.0 {
            pos.add(v);
        } else {
            neg.add(v);
        }
        let (p, q) = (pos.value(), neg.value());
        if q < 0.0 {
            factor = factor.min(p / -q);
        }
    }
    let scaled = |t: f64| -> Vec<f64> {
        values
            .iter()
            .map(|&v| if v < 0.0 { v * t } else { v })
            .collect()
    };
    // rounding can leave a partial sum a hair below zero; back off until exact
    let mut shrink = 1e-15;
    loop {
        let candidate = scaled(factor);
        if validate_weights(&candidate, 0.0)?.is_admissible() {
            return nonzero(candidate);
        }
        factor = if shrink >= 1.0 {
            0.0
        } else {
            factor * (1.0 - shrink)
        };
        shrink *= 4.0;
    }
}

fn nonzero(values: Vec<f64>) -> Result<SignedWeights> {
    if values.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("all weights are zero".into()));
    }
    SignedWeights::exact(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NI: Direction = Direction::NonIncreasing;

    #[test]
    fn monotone_examples() {
        let v = [5.0, 4.0, 4.0, 1.0];
        assert_eq!(project_monotone(&v, NI, 0.0, 10.0).unwrap().values(), &v);
        assert_eq!(
            project_monotone(&[1.0, 3.0], NI, 0.0, 10.0)
                .unwrap()
                .values(),
            &[2.0, 2.0]
        );
        assert_eq!(
            project_monotone(&[5.0, 1.0], NI, 2.0, 4.0)
                .unwrap()
                .values(),
            &[4.0, 2.0]
        );
        assert_eq!(
            project_monotone(&[3.0, 1.0, 2.0], Direction::NonDecreasing, 0.0, 10.0)
                .unwrap()
                .values(),
            &[2.0, 2.0, 2.0]
        );
        assert!(project_monotone(&[1.0], NI, 2.0, 1.0).is_err());
    }

    #[test]
    fn monotone_is_idempotent() {
        let once = project_monotone(&[0.3, 2.0, -1.0, 0.7, 0.7, 5.0], NI, 0.0, 3.0).unwrap();
        let twice = project_monotone(once.values(), NI, 0.0, 3.0).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn clip_prefix_examples() {
        let w = [1.0, -1.0, 0.5];
        assert_eq!(
            project_weights(&w, WeightRepair::ClipPrefix)
                .unwrap()
                .values(),
            &w
        );
        let out = project_weights(&[-1.0, 2.0], WeightRepair::ClipPrefix).unwrap();
        assert_eq!(out.values(), &[0.0, 1.0]);
        assert_eq!(out.prefix_sums(), &[0.0, 1.0]);
        let out = project_weights(&[1.0, -2.0, 2.0], WeightRepair::ClipPrefix).unwrap();
        assert_eq!(out.prefix_sums(), &[1.0, 0.0, 1.0]);
        assert_eq!(out.values(), &[1.0, -1.0, 1.0]);
    }

    #[test]
    fn rescale_negative_examples() {
        // prefixes {1, 1-2t, 3-2t}: t = 1/2
        let out = project_weights(&[1.0, -2.0, 2.0], WeightRepair::RescaleNegative).unwrap();
        assert_eq!(out.values(), &[1.0, -1.0, 2.0]);
        let out = project_weights(&[-1.0, 2.0], WeightRepair::RescaleNegative).unwrap();
        assert_eq!(out.values(), &[0.0, 2.0]);
    }

    #[test]
    fn all_zero_is_degenerate() {
        for mode in [WeightRepair::ClipPrefix, WeightRepair::RescaleNegative] {
            assert!(matches!(
                project_weights(&[-1.0, -1.0], mode),
                Err(Error::Degenerate(_))
            ));
            assert!(matches!(
                project_weights(&[0.0, -1.0], mode),
                Err(Error::Degenerate(_))
            ));
        }
    }

    #[test]
    fn awkward_floats_come_out_exactly_admissible() {
        let v = [
            0.1,
            -0.3,
            0.2 + 1e-17,
            0.7,
            -0.700_000_000_000_000_1,
            1e-300,
            -0.1,
        ];
        for mode in [WeightRepair::ClipPrefix, WeightRepair::RescaleNegative] {
            let w = project_weights(&v, mode).unwrap();
            assert!(w.prefix_sums().iter().all(|&p| p >= 0.0));
        }
    }
}
