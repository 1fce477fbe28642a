//! Scalar inequalities the ratio bounds are built from.

use crate::error::{Error, Result};
use crate::sum::ScaledSum;

use super::Gap;

fn require_nonnegative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} must be finite and >= 0, got {v}"
        )))
    }
}

/// `2^{p-1} (α^p + β^p) - (α + β)^p`, non-negative by convexity of `x^p`.
pub fn jensen_gap(alpha: f64, beta: f64, p: f64) -> Result<Gap> {
    require_nonnegative("alpha", alpha)?;
    require_nonnegative("beta", beta)?;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!(
            "p must be finite and >= 1, got {p}"
        )));
    }
    let spread = 2f64.powf(p - 1.0) * (alpha.powf(p) + beta.powf(p));
    let joint = (alpha + beta).powf(p);
    Ok(Gap {
        value: spread - joint,
        scale: spread + joint,
    })
}

/// `α^p / p + β^q / q - αβ` with `q = p/(p-1)`; zero iff `α^p = β^q`.
pub fn young_gap(alpha: f64, beta: f64, p: f64) -> Result<Gap> {
    require_nonnegative("alpha", alpha)?;
    require_nonnegative("beta", beta)?;
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!(
            "p must be finite and > 1, got {p}"
        )));
    }
    let q = p / (p - 1.0);
    let (x, y, xy) = (alpha.powf(p) / p, beta.powf(q) / q, alpha * beta);
    Ok(Gap {
        value: x + y - xy,
        scale: x + y + xy,
    })
}

/// Mean-value bracket for the secant slope of `x^p` on `[β, α]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBracket {
    /// `p β^{p-1}`
    pub lower: f64,
    /// `(α^p - β^p) / (α - β)`
    pub value: f64,
    /// `p α^{p-1}`
    pub upper: f64,
}

pub fn power_bracket(alpha: f64, beta: f64, p: f64) -> Result<PowerBracket> {
    require_nonnegative("alpha", alpha)?;
    require_nonnegative("beta", beta)?;
    if !(alpha > beta) {
        return Err(Error::Parameter(format!(
            "need alpha > beta, got {alpha} <= {beta}"
        )));
    }
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!(
            "p must be finite and > 1, got {p}"
        )));
    }
    Ok(PowerBracket {
        lower: p * beta.powf(p - 1.0),
        value: (alpha.powf(p) - beta.powf(p)) / (alpha - beta),
        upper: p * alpha.powf(p - 1.0),
    })
}

/// Weighted AM-GM gap `sum v_m a_m^{1/v_m} - prod a_m` with `sum v_m = 1`.
pub fn weighted_amgm_gap(values: &[f64], weights: &[f64]) -> Result<Gap> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    if values.len() != weights.len() {
        return Err(Error::Length {
            expected: values.len(),
            found: weights.len(),
        });
    }
    for (i, (&a, &v)) in values.iter().zip(weights).enumerate() {
        require_nonnegative(&format!("a_{}", i + 1), a)?;
        if !(v > 0.0) {
            return Err(Error::Parameter(format!(
                "v_{} = {v} must be positive",
                i + 1
            )));
        }
    }
    crate::bounds::check_unit_sum(weights)?;
    let arithmetic = ScaledSum::of(values.iter().zip(weights).map(|(a, v)| v * a.powf(1.0 / v)));
    let product: f64 = values.iter().product();
    Ok(Gap {
        value: arithmetic.value - product,
        scale: arithmetic.scale + product,
    })
}
