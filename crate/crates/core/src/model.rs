//! Signed weights, bounded monotone sequences and Abel summation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::{self, ScaledSum};

/// Compensated partial sums `P_k = p_1 + ... + p_k`.
pub fn partial_sums(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::Empty);
    }
    check_finite(weights)?;
    Ok(sum::cumulative(weights))
}

/// Outcome of [`validate_weights`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Admissibility {
    Admissible,
    /// First `k` (1-based) with `P_k < -tolerance`.
    Violation {
        index: usize,
        prefix: f64,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

pub fn validate_weights(values: &[f64], tolerance: f64) -> Result<Admissibility> {
    if !(tolerance >= 0.0) {
        return Err(Error::Parameter(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }
    let prefix = partial_sums(values)?;
    Ok(first_violation(&prefix, tolerance))
}

fn first_violation(prefix: &[f64], tolerance: f64) -> Admissibility {
    prefix
        .iter()
        .position(|&p| p < -tolerance)
        .map_or(Admissibility::Admissible, |i| Admissibility::Violation {
            index: i + 1,
            prefix: prefix[i],
        })
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite { index: i + 1 }),
        None => Ok(()),
    }
}

/// Real weights `p_1..p_n` whose partial sums are non-negative.
///
/// The certificate is checked once, at construction, against an explicit
/// tolerance. Inadmissible input is rejected; repairing it is the job of
/// [`crate::search::project_weights`].
#[derive(Debug, Clone, PartialEq)]
pub struct SignedWeights {
    values: Vec<f64>,
    prefix: Vec<f64>,
    tolerance: f64,
}

impl SignedWeights {
    pub fn new(values: Vec<f64>, tolerance: f64) -> Result<Self> {
        match validate_weights(&values, tolerance)? {
            Admissibility::Admissible => {}
            Admissibility::Violation { index, prefix } => {
                return Err(Error::Inadmissible { index, prefix })
            }
        }
        let prefix = sum::cumulative(&values);
        Ok(SignedWeights {
            values,
            prefix,
            tolerance,
        })
    }

    /// Admissibility checked at tolerance 0.
    pub fn exact(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 0.0)
    }

    /// `p_k = (-1)^{k+1}`, so the partial sums alternate 1, 0, 1, 0, ...
    pub fn alternating(n: usize) -> Result<Self> {
        let values = (0..n)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Self::exact(values)
    }

    /// Classical unit weights.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::exact(vec![1.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn prefix_sums(&self) -> &[f64] {
        &self.prefix
    }

    /// `P_n`.
    pub fn total(&self) -> f64 {
        *self.prefix.last().expect("weights are never empty")
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All `p_k >= 0`, the classical case.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&p| p >= 0.0)
    }

    /// Appends `other`. The result stays admissible because every new prefix
    /// is `P_n + Q_j` with both terms non-negative.
    pub fn concat(&self, other: &SignedWeights) -> Result<Self> {
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        Self::new(values, self.tolerance + other.tolerance)
    }
}

/// Declared direction of a monotone sequence. Ties are always allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    NonIncreasing,
    NonDecreasing,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::NonIncreasing => Direction::NonDecreasing,
            Direction::NonDecreasing => Direction::NonIncreasing,
        }
    }

    /// Whether `first` may precede `second`.
    #[inline]
    pub fn allows(self, first: f64, second: f64) -> bool {
        match self {
            Direction::NonIncreasing => first >= second,
            Direction::NonDecreasing => first <= second,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::NonIncreasing => "non-increasing",
            Direction::NonDecreasing => "non-decreasing",
        })
    }
}

/// First failure found by [`validate_monotone`]; indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneViolation {
    /// `a_index` and `a_{index+1}` are out of order.
    Order { index: usize, direction: Direction },
    /// `a_index` lies outside `[lo, hi]`.
    Bound {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
}

impl MonotoneViolation {
    pub fn index(&self) -> usize {
        match *self {
            MonotoneViolation::Order { index, .. } | MonotoneViolation::Bound { index, .. } => {
                index
            }
        }
    }
}

impl fmt::Display for MonotoneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MonotoneViolation::Order { index, direction } => write!(
                f,
                "elements {index} and {} break the {direction} order",
                index + 1
            ),
            MonotoneViolation::Bound {
                index,
                value,
                lo,
                hi,
            } => {
                write!(f, "element {index} = {value} lies outside [{lo}, {hi}]")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneVerdict {
    Pass,
    Fail(MonotoneViolation),
}

impl MonotoneVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, MonotoneVerdict::Pass)
    }
}

pub fn validate_monotone(
    values: &[f64],
    direction: Direction,
    lo: f64,
    hi: f64,
) -> Result<MonotoneVerdict> {
    if !(lo <= hi) {
        return Err(Error::Parameter(format!("bounds [{lo}, {hi}] are empty")));
    }
    check_finite(values)?;
    for (i, &v) in values.iter().enumerate() {
        if v < lo || v > hi {
            return Ok(MonotoneVerdict::Fail(MonotoneViolation::Bound {
                index: i + 1,
                value: v,
                lo,
                hi,
            }));
        }
        if let Some(&next) = values.get(i + 1) {
            if !direction.allows(v, next) {
                return Ok(MonotoneVerdict::Fail(MonotoneViolation::Order {
                    index: i + 1,
                    direction,
                }));
            }
        }
    }
    Ok(MonotoneVerdict::Pass)
}

/// Non-negative monotone sequence with declared bounds `lo <= a_k <= hi`.
///
/// Strict positivity is not required here; operations that divide by the
/// lower bound check it themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedMonotoneSeq {
    values: Vec<f64>,
    direction: Direction,
    lo: f64,
    hi: f64,
}

impl BoundedMonotoneSeq {
    pub fn new(values: Vec<f64>, direction: Direction, lo: f64, hi: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if !(lo >= 0.0) {
            return Err(Error::Parameter(format!(
                "lower bound must be non-negative, got {lo}"
            )));
        }
        match validate_monotone(&values, direction, lo, hi)? {
            MonotoneVerdict::Pass => Ok(BoundedMonotoneSeq {
                values,
                direction,
                lo,
                hi,
            }),
            MonotoneVerdict::Fail(v) => Err(Error::Monotone(v)),
        }
    }

    /// Bounds taken as the observed minimum and maximum.
    pub fn tight(values: Vec<f64>, direction: Direction) -> Result<Self> {
        let (lo, hi) = min_max(&values).ok_or(Error::Empty)?;
        Self::new(values, direction, lo, hi)
    }

    /// Picks non-increasing when it holds, non-decreasing otherwise.
    pub fn tight_any(values: Vec<f64>) -> Result<Self> {
        match Self::tight(values.clone(), Direction::NonIncreasing) {
            Ok(s) => Ok(s),
            Err(Error::Monotone(MonotoneViolation::Order { .. })) => {
                Self::tight(values, Direction::NonDecreasing)
            }
            Err(e) => Err(e),
        }
    }

    pub fn constant(value: f64, n: usize) -> Result<Self> {
        Self::tight(vec![value; n], Direction::NonIncreasing)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Multiplies every element and both bounds by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::Parameter(format!(
                "scale factor {factor} must be positive"
            )));
        }
        Self::new(
            self.values.iter().map(|v| v * factor).collect(),
            self.direction,
            self.lo * factor,
            self.hi * factor,
        )
    }
}

pub(crate) fn min_max(values: &[f64]) -> Option<(f64, f64)> {
    values.iter().fold(None, |acc, &v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

/// Weights plus two sequences of the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedInstance {
    weights: SignedWeights,
    a: BoundedMonotoneSeq,
    b: BoundedMonotoneSeq,
}

impl WeightedInstance {
    pub fn new(
        weights: SignedWeights,
        a: BoundedMonotoneSeq,
        b: BoundedMonotoneSeq,
    ) -> Result<Self> {
        for seq in [&a, &b] {
            if seq.len() != weights.len() {
                return Err(Error::Length {
                    expected: weights.len(),
                    found: seq.len(),
                });
            }
        }
        Ok(WeightedInstance { weights, a, b })
    }

    pub fn weights(&self) -> &SignedWeights {
        &self.weights
    }

    pub fn a(&self) -> &BoundedMonotoneSeq {
        &self.a
    }

    pub fn b(&self) -> &BoundedMonotoneSeq {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Both sequences declared non-increasing, as Theorems on Hölder and
    /// Minkowski ratios require.
    pub fn both_non_increasing(&self) -> bool {
        self.a.direction == Direction::NonIncreasing && self.b.direction == Direction::NonIncreasing
    }
}

/// Weighted sum `sum p_k c_k` in direct form, with its term magnitude.
pub fn weighted_sum(weights: &SignedWeights, values: &[f64]) -> Result<ScaledSum> {
    if values.len() != weights.len() {
        return Err(Error::Length {
            expected: weights.len(),
            found: values.len(),
        });
    }
    Ok(ScaledSum::of(
        weights.values().iter().zip(values).map(|(p, c)| p * c),
    ))
}

/// Terms of the summation-by-parts form, summed with their magnitude.
/// `prefix` and `values` have equal, non-zero length.
pub(crate) fn abel_terms(prefix: &[f64], values: &[f64]) -> ScaledSum {
    abel_with(prefix, values, |p| p)
}

/// [`abel_terms`] with partial sums inside the admissibility tolerance
/// taken as zero, so an accepted `-tol <= P_k < 0` cannot flip the sign of
/// an otherwise non-negative sum.
pub(crate) fn abel_terms_admissible(prefix: &[f64], values: &[f64]) -> ScaledSum {
    abel_with(prefix, values, |p| p.max(0.0))
}

fn abel_with(prefix: &[f64], values: &[f64], clip: impl Fn(f64) -> f64) -> ScaledSum {
    let n = values.len();
    ScaledSum::of((0..n).map(|k| {
        let step = if k + 1 < n {
            values[k] - values[k + 1]
        } else {
            values[k]
        };
        clip(prefix[k]) * step
    }))
}

/// Summation by parts: `sum_{k<n} P_k (c_k - c_{k+1}) + P_n c_n`.
///
/// Equal to `sum p_k c_k` up to rounding. When `c` is non-increasing and
/// non-negative every term is a product of non-negative factors, which is why
/// admissible weights keep all the ratios in this crate non-negative.
pub fn abel_sum(weights: &SignedWeights, values: &[f64]) -> Result<f64> {
    let n = weights.len();
    if values.len() != n {
        return Err(Error::Length {
            expected: n,
            found: values.len(),
        });
    }
    Ok(abel_terms(weights.prefix_sums(), values).value)
}
