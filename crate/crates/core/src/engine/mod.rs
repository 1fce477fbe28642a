//! Inequality ratios and slacks over admissible signed weights.
//!
//! Every fraction is assembled from compensated weighted sums. Inner sums
//! that theory says are non-negative are checked: negatives within
//! [`NOISE_RELATIVE`] of their term magnitude are clamped to zero, anything
//! larger is an [`Error::Invariant`].

mod elementary;
mod report;

pub use elementary::{jensen_gap, power_bracket, weighted_amgm_gap, young_gap, PowerBracket};
pub use report::{RatioReport, DENOMINATOR_FLOOR, DENOMINATOR_RELATIVE, NOISE_RELATIVE};

use serde::{Deserialize, Serialize};

use crate::bounds::{self, conjugate};
use crate::error::{Error, Result};
use crate::model::{BoundedMonotoneSeq, Direction, SignedWeights, WeightedInstance};
use crate::sum::ScaledSum;
use report::nonnegative;

/// A slack or gap, with the magnitude of the terms it was formed from.
pub type Gap = ScaledSum;

/// Conjugate exponents `p, q > 1` with `1/p + 1/q = 1`; `q` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::Parameter(format!(
                "exponent p must be finite and > 1, got {p}"
            )));
        }
        let q = conjugate(p);
        if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-14 {
            return Err(Error::Parameter(format!(
                "exponent p = {p} too close to 1 for a representable conjugate"
            )));
        }
        Ok(ExponentPair { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// `sum p_k c_k` in summation-by-parts form.
///
/// Every sequence fed through here is non-increasing and non-negative under
/// the theorem hypotheses, so the terms `P_k (c_k - c_{k+1})` and `P_n c_n`
/// are all non-negative and the sum is free of cancellation even when the
/// weights themselves are huge and alternate in sign. The direct form
/// `sum p_k c_k` can lose every digit in that situation.
fn weighted<I: IntoIterator<Item = f64>>(weights: &SignedWeights, values: I) -> ScaledSum {
    let c: Vec<f64> = values.into_iter().collect();
    crate::model::abel_terms_admissible(weights.prefix_sums(), &c)
}

fn require_direction(seq: &BoundedMonotoneSeq, name: &str, direction: Direction) -> Result<()> {
    if seq.direction() == direction {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "sequence {name} must be {direction}, declared {}",
            seq.direction()
        )))
    }
}

fn require_positive_lo(seq: &BoundedMonotoneSeq, name: &str) -> Result<()> {
    if seq.lo() > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "sequence {name} needs a positive lower bound, declared {}",
            seq.lo()
        )))
    }
}

fn require_p_at_least_one(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "exponent p must be finite and >= 1, got {p}"
        )))
    }
}

/// Hölder ratio
/// `(sum p_k a_k^q)^{1/q} (sum p_k b_k^p)^{1/p} / sum p_k a_k b_k`
/// against `(pA/a)^{1/p} (qB/b)^{1/q}` from the declared bounds.
///
/// Both sequences must be declared non-increasing with positive lower bounds.
/// The ratio has no positive lower bound (see
/// [`crate::families::holder_collapse`]).
pub fn holder_ratio(inst: &WeightedInstance, exps: ExponentPair) -> Result<RatioReport> {
    require_direction(inst.a(), "a", Direction::NonIncreasing)?;
    require_direction(inst.b(), "b", Direction::NonIncreasing)?;
    holder_ratio_unchecked(inst, exps)
}

/// [`holder_ratio`] without the direction hypotheses.
///
/// Used for constructions whose value does not depend on the ordering, such
/// as the paired zero-numerator family. The reported bound then carries no
/// guarantee.
pub fn holder_ratio_unchecked(inst: &WeightedInstance, exps: ExponentPair) -> Result<RatioReport> {
    let (a, b) = (inst.a(), inst.b());
    require_positive_lo(a, "a")?;
    require_positive_lo(b, "b")?;
    let (p, q) = (exps.p(), exps.q());
    let w = inst.weights();
    let sum_a = nonnegative(
        weighted(w, a.values().iter().map(|x| x.powf(q))),
        "sum p_k a_k^q",
    )?;
    let sum_b = nonnegative(
        weighted(w, b.values().iter().map(|x| x.powf(p))),
        "sum p_k b_k^p",
    )?;
    let cross = weighted(w, a.values().iter().zip(b.values()).map(|(x, y)| x * y));
    let denominator = nonnegative(cross, "sum p_k a_k b_k")?;
    let numerator = sum_a.powf(1.0 / q) * sum_b.powf(1.0 / p);
    let bound = bounds::holder_constant(a.lo(), a.hi(), b.lo(), b.hi(), p)?;
    Ok(RatioReport::assemble(numerator, denominator, cross, bound))
}

/// Tolerance for the monotonicity check on `a_k / b_k`, which is formed by
/// division and so may wobble by an ulp or two.
const RATIO_MONOTONE_RELATIVE: f64 = 1e-12;

/// Observed `(m, M)` of `a_k / b_k` when that sequence is monotone.
pub fn ratio_sequence_bounds(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if let Some(i) = b.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Domain(format!(
            "b_{} = {} must be positive",
            i + 1,
            b[i]
        )));
    }
    let r: Vec<f64> = a.iter().zip(b).map(|(x, y)| x / y).collect();
    let slack = |x: f64| RATIO_MONOTONE_RELATIVE * x.abs();
    let non_increasing = r.windows(2).all(|w| w[1] <= w[0] + slack(w[0]));
    let non_decreasing = r.windows(2).all(|w| w[1] + slack(w[0]) >= w[0]);
    if !(non_increasing || non_decreasing) {
        return Err(Error::Precondition(
            "the ratio sequence a_k / b_k is not monotone".into(),
        ));
    }
    let (m, big_m) = crate::model::min_max(&r).ok_or(Error::Empty)?;
    if !(m > 0.0) {
        return Err(Error::Domain(
            "the ratio sequence a_k / b_k must be positive".into(),
        ));
    }
    Ok((m, big_m))
}

/// Cauchy ratio `(sum p a^2)(sum p b^2) / (sum p a b)^2` against
/// `(m/M + M/m)^2 / 4`, where `m, M` are the observed extremes of `a_k/b_k`.
pub fn cauchy_ratio(inst: &WeightedInstance) -> Result<RatioReport> {
    let (a, b) = (inst.a(), inst.b());
    require_direction(a, "a", Direction::NonIncreasing)?;
    require_direction(b, "b", Direction::NonIncreasing)?;
    let (m, big_m) = ratio_sequence_bounds(a.values(), b.values())?;
    let w = inst.weights();
    let sum_aa = nonnegative(
        weighted(w, a.values().iter().map(|x| x * x)),
        "sum p_k a_k^2",
    )?;
    let sum_bb = nonnegative(
        weighted(w, b.values().iter().map(|x| x * x)),
        "sum p_k b_k^2",
    )?;
    let cross = weighted(w, a.values().iter().zip(b.values()).map(|(x, y)| x * y));
    let sum_ab = nonnegative(cross, "sum p_k a_k b_k")?;
    let bound = bounds::cauchy_constant(m, big_m)?;
    Ok(RatioReport::assemble(
        sum_aa * sum_bb,
        sum_ab * sum_ab,
        cross,
        bound,
    ))
}

/// Product ratio of `M` sequences:
/// `prod_m (sum_k p_k x_{m,k}^{1/w_m})^{w_m} / sum_k p_k prod_m x_{m,k}`,
/// reported against [`bounds::multi_holder_constant`].
pub fn multi_holder_ratio(
    seqs: &[BoundedMonotoneSeq],
    weights: &SignedWeights,
    w: &[f64],
) -> Result<RatioReport> {
    if seqs.is_empty() {
        return Err(Error::Empty);
    }
    if w.len() != seqs.len() {
        return Err(Error::Length {
            expected: seqs.len(),
            found: w.len(),
        });
    }
    if let Some(i) = w.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::Parameter(format!(
            "w_{} = {} must be positive",
            i + 1,
            w[i]
        )));
    }
    bounds::check_unit_sum(w)?;
    let n = weights.len();
    for (m, seq) in seqs.iter().enumerate() {
        let name = format!("x_{}", m + 1);
        if seq.len() != n {
            return Err(Error::Length {
                expected: n,
                found: seq.len(),
            });
        }
        require_direction(seq, &name, Direction::NonIncreasing)?;
        require_positive_lo(seq, &name)?;
    }
    let mut numerator = 1.0;
    for (seq, &wm) in seqs.iter().zip(w) {
        let s = nonnegative(
            weighted(weights, seq.values().iter().map(|x| x.powf(1.0 / wm))),
            "sum p_k x_k^{1/w}",
        )?;
        numerator *= s.powf(wm);
    }
    let products = (0..n).map(|k| seqs.iter().map(|s| s.values()[k]).product::<f64>());
    let cross = weighted(weights, products);
    let denominator = nonnegative(cross, "sum p_k prod_m x_{m,k}")?;
    let lo: Vec<f64> = seqs.iter().map(|s| s.lo()).collect();
    let hi: Vec<f64> = seqs.iter().map(|s| s.hi()).collect();
    let bound = bounds::multi_holder_constant(&lo, &hi, w)?;
    Ok(RatioReport::assemble(numerator, denominator, cross, bound))
}

/// Minkowski ratio
/// `[(sum p a^p)^{1/p} + (sum p b^p)^{1/p}] / (sum p (a+b)^p)^{1/p}`
/// against the best-possible `2^{1-1/p}`. Zero entries are allowed.
pub fn minkowski_ratio(inst: &WeightedInstance, p: f64) -> Result<RatioReport> {
    require_p_at_least_one(p)?;
    let (a, b) = (inst.a(), inst.b());
    require_direction(a, "a", Direction::NonIncreasing)?;
    require_direction(b, "b", Direction::NonIncreasing)?;
    let w = inst.weights();
    let sum_a = nonnegative(
        weighted(w, a.values().iter().map(|x| x.powf(p))),
        "sum p_k a_k^p",
    )?;
    let sum_b = nonnegative(
        weighted(w, b.values().iter().map(|x| x.powf(p))),
        "sum p_k b_k^p",
    )?;
    let both = weighted(
        w,
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x + y).powf(p)),
    );
    let sum_ab = nonnegative(both, "sum p_k (a_k + b_k)^p")?;
    let numerator = sum_a.powf(1.0 / p) + sum_b.powf(1.0 / p);
    let denominator = sum_ab.powf(1.0 / p);
    let bound = bounds::minkowski_constant(p)?;
    Ok(RatioReport::assemble(numerator, denominator, both, bound))
}

/// `B sum p_k a_k - sum p_k a_k b_k` for non-negative non-increasing `a` and
/// non-decreasing `b <= B`; non-negative under admissible weights.
pub fn chebyshev_slack(inst: &WeightedInstance, big_b: f64) -> Result<Gap> {
    let (a, b) = (inst.a(), inst.b());
    require_direction(a, "a", Direction::NonIncreasing)?;
    require_direction(b, "b", Direction::NonDecreasing)?;
    if let Some(i) = b.values().iter().position(|&v| v > big_b) {
        return Err(Error::Precondition(format!(
            "b_{} = {} exceeds B = {big_b}",
            i + 1,
            b.values()[i]
        )));
    }
    Ok(weighted(
        inst.weights(),
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| x * (big_b - y)),
    ))
}

/// `sum p_k (a_k + b_k)^p - sum p_k (a_k^p + b_k^p)`, the superadditivity
/// gap behind the Minkowski bound.
pub fn superadditivity_slack(inst: &WeightedInstance, p: f64) -> Result<Gap> {
    require_p_at_least_one(p)?;
    let (a, b) = (inst.a(), inst.b());
    require_direction(a, "a", Direction::NonIncreasing)?;
    require_direction(b, "b", Direction::NonIncreasing)?;
    let terms: Vec<(f64, f64)> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(&x, &y)| {
            let (s, xp, yp) = ((x + y).powf(p), x.powf(p), y.powf(p));
            (s - xp - yp, s + xp + yp)
        })
        .collect();
    let gap = weighted(inst.weights(), terms.iter().map(|t| t.0));
    let magnitude = weighted(inst.weights(), terms.iter().map(|t| t.1));
    Ok(Gap {
        value: gap.value,
        scale: magnitude.scale.max(gap.scale),
    })
}

/// Jensen–Steffensen gap `sum p_k a_k^p - (sum p_k a_k)^p` for the convex
/// test function `x^p`, claimed only when every `P_k` lies in `[0, 1]`.
pub fn jensen_steffensen_check(
    seq: &BoundedMonotoneSeq,
    weights: &SignedWeights,
    p: f64,
) -> Result<Gap> {
    require_p_at_least_one(p)?;
    require_direction(seq, "a", Direction::NonIncreasing)?;
    require_positive_lo(seq, "a")?;
    if seq.len() != weights.len() {
        return Err(Error::Length {
            expected: weights.len(),
            found: seq.len(),
        });
    }
    let tol = weights.tolerance();
    if let Some(i) = weights.prefix_sums().iter().position(|&s| s > 1.0 + tol) {
        return Err(Error::Precondition(format!(
            "partial sum P_{} = {} exceeds 1",
            i + 1,
            weights.prefix_sums()[i]
        )));
    }
    let powered = weighted(weights, seq.values().iter().map(|x| x.powf(p)));
    let linear = weighted(weights, seq.values().iter().copied());
    let mean_power = linear.value.max(0.0).powf(p);
    Ok(Gap {
        value: powered.value - mean_power,
        scale: powered.scale + linear.scale.powf(p),
    })
}
