//! Closed-form constants bounding each ratio.
//!
//! Everything is evaluated as `exp` of a weighted log-sum so that large
//! exponents or wide bound ratios do not overflow intermediate powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn require_ordered(lo_name: &str, lo: f64, hi_name: &str, hi: f64) -> Result<()> {
    require_positive(lo_name, lo)?;
    require_positive(hi_name, hi)?;
    if lo <= hi {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{lo_name} = {lo} exceeds {hi_name} = {hi}"
        )))
    }
}

/// Conjugate exponent `q = p / (p - 1)`.
pub(crate) fn conjugate(p: f64) -> f64 {
    p / (p - 1.0)
}

/// Upper bound of the Hölder ratio for non-increasing sequences with
/// `a <= a_k <= A`, `b <= b_k <= B`:
///
/// `(p A / a)^{1/p} (q B / b)^{1/q}`, always `> 1`.
pub fn holder_constant(a: f64, big_a: f64, b: f64, big_b: f64, p: f64) -> Result<f64> {
    require_ordered("a", a, "A", big_a)?;
    require_ordered("b", b, "B", big_b)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!(
            "exponent p must be finite and > 1, got {p}"
        )));
    }
    let q = conjugate(p);
    let log = (p.ln() + big_a.ln() - a.ln()) / p + (q.ln() + big_b.ln() - b.ln()) / q;
    Ok(log.exp())
}

/// Kantorovich-type constant `(m/M + M/m)^2 / 4` for ratio sequences in
/// `[m, M]`. It depends on `M/m` only and equals 1 when `m = M`.
pub fn cauchy_constant(m: f64, big_m: f64) -> Result<f64> {
    require_ordered("m", m, "M", big_m)?;
    let r = (big_m.ln() - m.ln()).exp();
    let s = r + 1.0 / r;
    Ok(0.25 * s * s)
}

fn check_multi(lo: &[f64], hi: &[f64], w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::Empty);
    }
    for v in [lo, hi] {
        if v.len() != w.len() {
            return Err(Error::Length {
                expected: w.len(),
                found: v.len(),
            });
        }
    }
    for (i, ((&l, &h), &wm)) in lo.iter().zip(hi).zip(w).enumerate() {
        require_ordered(&format!("a_{}", i + 1), l, &format!("A_{}", i + 1), h)?;
        require_positive(&format!("w_{}", i + 1), wm)?;
    }
    check_unit_sum(w)
}

pub(crate) fn check_unit_sum(w: &[f64]) -> Result<()> {
    let total = crate::sum::sum(w.iter().copied());
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!(
            "exponent weights must sum to 1, got {total}"
        )));
    }
    Ok(())
}

/// Bound for the product ratio of `M` sequences with exponent weights `w`:
///
/// `prod_m w_m^{-w_m} (A_m / a_m)^{1 - w_m}`.
///
/// The mean-value step gives `sum p x^{1/w} <= A^{1/w - 1}/w * sum p x`,
/// weighted AM-GM turns the product of the `w_m`-th powers into a sum, and
/// the Chebyshev-type lemma bounds the resulting coefficient by
/// `sum_m w_m prod_{j != m} 1/a_j`. The ratio is unchanged when any `x_m` is
/// rescaled, so that chain may be run on rescaled sequences; the best
/// rescaling puts every `a_m` at the same level, and the product above is
/// what remains. For `M = 2`, `w = (1/2, 1/2)` it is `2 sqrt(A_1 A_2 / (a_1 a_2))`,
/// the two-sequence Hölder constant at `p = 2`.
pub fn multi_holder_constant(lo: &[f64], hi: &[f64], w: &[f64]) -> Result<f64> {
    check_multi(lo, hi, w)?;
    let log: f64 = lo
        .iter()
        .zip(hi)
        .zip(w)
        .map(|((&l, &h), &wm)| (1.0 - wm) * (h.ln() - l.ln()) - wm * wm.ln())
        .sum();
    Ok(log.exp())
}

/// `sum_m A_m^{1/w_m - 1} prod_{j != m} A_j^{1/w_j - 1} / (w_j a_j)`.
///
/// The product constant in the form it is usually printed. It drops the
/// outer `w_m` powers of the mean-value factors and is not scale invariant,
/// so it falls below the ratio once the sequences are small: for a single
/// term with `x_1 = x_2 = c < 1/4` the ratio is 1 while this gives `4c`.
/// Kept for comparison; [`multi_holder_constant`] is the bound reported.
pub fn multi_holder_constant_unscaled(lo: &[f64], hi: &[f64], w: &[f64]) -> Result<f64> {
    check_multi(lo, hi, w)?;
    let log_terms: Vec<f64> = hi
        .iter()
        .zip(w)
        .map(|(&h, &wm)| (1.0 / wm - 1.0) * h.ln())
        .collect();
    let log_other: Vec<f64> = log_terms
        .iter()
        .zip(lo.iter().zip(w))
        .map(|(&t, (&l, &wm))| t - wm.ln() - l.ln())
        .collect();
    let total_other: f64 = log_other.iter().sum();
    Ok(log_terms
        .iter()
        .zip(&log_other)
        .map(|(&t, &o)| (t + total_other - o).exp())
        .sum())
}

/// Best-possible Minkowski constant `2^{1 - 1/p}` for `p >= 1`
/// (`p = +inf` gives the limit 2).
pub fn minkowski_constant(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!(
            "exponent p must be >= 1, got {p}"
        )));
    }
    Ok(((1.0 - 1.0 / p) * std::f64::consts::LN_2).exp())
}

/// A constant together with the scalars it depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundSpec {
    Holder {
        a: f64,
        big_a: f64,
        b: f64,
        big_b: f64,
        p: f64,
    },
    Cauchy {
        m: f64,
        big_m: f64,
    },
    MultiHolder {
        lo: Vec<f64>,
        hi: Vec<f64>,
        w: Vec<f64>,
    },
    Minkowski {
        p: f64,
    },
}

impl BoundSpec {
    pub fn evaluate(&self) -> Result<f64> {
        match self {
            BoundSpec::Holder {
                a,
                big_a,
                b,
                big_b,
                p,
            } => holder_constant(*a, *big_a, *b, *big_b, *p),
            BoundSpec::Cauchy { m, big_m } => cauchy_constant(*m, *big_m),
            BoundSpec::MultiHolder { lo, hi, w } => multi_holder_constant(lo, hi, w),
            BoundSpec::Minkowski { p } => minkowski_constant(*p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn holder_constant_examples() {
        assert_relative_eq!(
            holder_constant(3.0, 3.0, 5.0, 5.0, 2.0).unwrap(),
            2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            holder_constant(1.0, 2.0, 1.0, 2.0, 2.0).unwrap(),
            4.0,
            max_relative = 1e-15
        );
        // a = A, b = B: p^{1/p} q^{1/q}, which is 2 at p = 2 and tends to 1 as p grows
        for p in [1.5, 3.0, 10.0, 1e6] {
            let q = p / (p - 1.0);
            let c = holder_constant(1.0, 1.0, 1.0, 1.0, p).unwrap();
            assert_relative_eq!(c, p.powf(1.0 / p) * q.powf(1.0 / q), max_relative = 1e-13);
            assert!(c > 1.0);
        }
    }

    #[test]
    fn holder_constant_rejects_bad_domain() {
        assert!(holder_constant(0.0, 1.0, 1.0, 1.0, 2.0).is_err());
        assert!(holder_constant(2.0, 1.0, 1.0, 1.0, 2.0).is_err());
        assert!(holder_constant(1.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cauchy_constant_examples() {
        assert_eq!(cauchy_constant(3.0, 3.0).unwrap(), 1.0);
        assert_relative_eq!(
            cauchy_constant(1.0, 2.0).unwrap(),
            1.5625,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            cauchy_constant(1.0, 10.0).unwrap(),
            25.5025,
            max_relative = 1e-14
        );
        assert!(cauchy_constant(0.0, 1.0).is_err());
        assert!(cauchy_constant(2.0, 1.0).is_err());
    }

    #[test]
    fn unscaled_multi_holder_examples() {
        assert_eq!(
            multi_holder_constant_unscaled(&[2.0], &[3.0], &[1.0]).unwrap(),
            1.0
        );
        assert_relative_eq!(
            multi_holder_constant_unscaled(&[1.0, 1.0], &[1.0, 1.0], &[0.5, 0.5]).unwrap(),
            4.0,
            max_relative = 1e-15
        );
        for c in [0.1, 2.0, 7.5] {
            assert_relative_eq!(
                multi_holder_constant_unscaled(&[c, c], &[c, c], &[0.5, 0.5]).unwrap(),
                4.0 * c,
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn multi_holder_examples() {
        assert_eq!(multi_holder_constant(&[2.0], &[3.0], &[1.0]).unwrap(), 1.0);
        // constant sequences: w^{-w} per factor, 2 for two halves
        for c in [0.1, 1.0, 7.5] {
            assert_relative_eq!(
                multi_holder_constant(&[c, c], &[c, c], &[0.5, 0.5]).unwrap(),
                2.0,
                max_relative = 1e-14
            );
        }
        let (a1, a2, b1, b2) = (0.5, 2.0, 1.5, 3.0);
        assert_relative_eq!(
            multi_holder_constant(&[a1, a2], &[b1, b2], &[0.5, 0.5]).unwrap(),
            holder_constant(a1, b1, a2, b2, 2.0).unwrap(),
            max_relative = 1e-14
        );
        assert!(multi_holder_constant(&[1.0, 1.0], &[1.0, 1.0], &[0.5, 0.6]).is_err());
        assert!(multi_holder_constant(&[1.0, 1.0], &[1.0, 1.0], &[1.5, -0.5]).is_err());
    }

    #[test]
    fn multi_holder_is_scale_invariant() {
        let lo = [0.5, 1.0, 2.0];
        let hi = [1.0, 4.0, 2.5];
        let w = [0.5, 0.25, 0.25];
        let base = multi_holder_constant(&lo, &hi, &w).unwrap();
        for s in [1e-3, 0.3, 17.0] {
            // rescale one sequence at a time as well as all of them
            let factors = [s, 1.0, s * s];
            let lo_s: Vec<f64> = lo.iter().zip(factors).map(|(v, f)| v * f).collect();
            let hi_s: Vec<f64> = hi.iter().zip(factors).map(|(v, f)| v * f).collect();
            assert_relative_eq!(
                multi_holder_constant(&lo_s, &hi_s, &w).unwrap(),
                base,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn minkowski_constant_examples() {
        assert_eq!(minkowski_constant(1.0).unwrap(), 1.0);
        assert_relative_eq!(
            minkowski_constant(2.0).unwrap(),
            std::f64::consts::SQRT_2,
            max_relative = 1e-15
        );
        assert_eq!(minkowski_constant(f64::INFINITY).unwrap(), 2.0);
        assert!(minkowski_constant(0.5).is_err());
        let mut prev = 1.0;
        for p in [1.01, 1.5, 2.0, 8.0, 64.0, 1e9] {
            let c = minkowski_constant(p).unwrap();
            assert!(c > prev && c < 2.0);
            prev = c;
        }
    }

    #[test]
    fn bound_spec_dispatches() {
        let spec = BoundSpec::Cauchy { m: 1.0, big_m: 2.0 };
        assert_relative_eq!(spec.evaluate().unwrap(), 1.5625, max_relative = 1e-15);
        assert_eq!(BoundSpec::Minkowski { p: 1.0 }.evaluate().unwrap(), 1.0);
    }
}
