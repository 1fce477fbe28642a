use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sum::ScaledSum;

/// Denominators at or below this absolute value are degenerate.
pub const DENOMINATOR_FLOOR: f64 = 1e-300;
/// Denominators below this fraction of their own term magnitude are degenerate.
pub const DENOMINATOR_RELATIVE: f64 = 1e-14;
/// Negative inner sums within this fraction of their term magnitude are noise.
pub const NOISE_RELATIVE: f64 = 1e-12;

/// Value of one inequality fraction against its bound.
///
/// When `degenerate` is set the denominator vanished (up to rounding);
/// `ratio` is then `+inf` and `slack` is `-inf`. In JSON both become `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub numerator: f64,
    pub denominator: f64,
    #[serde(
        serialize_with = "finite_or_null",
        deserialize_with = "null_as_infinite"
    )]
    pub ratio: f64,
    pub bound: f64,
    #[serde(
        serialize_with = "finite_or_null",
        deserialize_with = "null_as_neg_infinite"
    )]
    pub slack: f64,
    pub degenerate: bool,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn null_as_infinite<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

fn null_as_neg_infinite<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
}

impl RatioReport {
    /// Builds a report; `denominator_sum` is the inner sum the denominator is
    /// formed from, used for the degeneracy test.
    pub(crate) fn assemble(
        numerator: f64,
        denominator: f64,
        denominator_sum: ScaledSum,
        bound: f64,
    ) -> Self {
        let degenerate = denominator <= DENOMINATOR_FLOOR
            || denominator_sum.value <= DENOMINATOR_RELATIVE * denominator_sum.scale;
        let ratio = if degenerate {
            f64::INFINITY
        } else {
            numerator / denominator
        };
        RatioReport {
            numerator,
            denominator,
            ratio,
            bound,
            slack: bound - ratio,
            degenerate,
        }
    }

    /// Non-degenerate and `ratio <= bound + tol`.
    pub fn within_bound(&self, tol: f64) -> bool {
        !self.degenerate && self.ratio <= self.bound + tol
    }

    /// `ratio / bound`; zero for degenerate reports.
    pub fn tightness(&self) -> f64 {
        if self.degenerate {
            0.0
        } else {
            self.ratio / self.bound
        }
    }
}

/// Returns the inner sum clamped at zero, or an invariant error if it is
/// negative beyond rounding noise.
pub(crate) fn nonnegative(sum: ScaledSum, what: &str) -> Result<f64> {
    if sum.is_nonnegative(NOISE_RELATIVE) {
        Ok(sum.value.max(0.0))
    } else {
        Err(Error::Invariant(format!(
            "{what} = {:e} is negative beyond rounding (scale {:e}); weights are not admissible",
            sum.value, sum.scale
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = RatioReport::assemble(
            2.0,
            4.0,
            ScaledSum {
                value: 4.0,
                scale: 4.0,
            },
            1.0,
        );
        let json = serde_json::to_value(&r).unwrap();
        let obj = json.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            [
                "bound",
                "degenerate",
                "denominator",
                "numerator",
                "ratio",
                "slack"
            ]
        );
        assert_eq!(obj["ratio"], 0.5);
        assert_eq!(obj["slack"], 0.5);
    }

    #[test]
    fn degenerate_serializes_null_and_round_trips() {
        let r = RatioReport::assemble(
            1.0,
            0.0,
            ScaledSum {
                value: 0.0,
                scale: 2.0,
            },
            3.0,
        );
        assert!(r.degenerate);
        assert_eq!(r.ratio, f64::INFINITY);
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"ratio\":null"));
        let back: RatioReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(!r.within_bound(1.0));
        assert_eq!(r.tightness(), 0.0);
    }

    #[test]
    fn cancellation_marks_degenerate() {
        let r = RatioReport::assemble(
            1.0,
            1e-15,
            ScaledSum {
                value: 1e-15,
                scale: 1.0,
            },
            3.0,
        );
        assert!(r.degenerate);
    }

    #[test]
    fn noise_is_clamped_but_real_negatives_fail() {
        assert_eq!(
            nonnegative(
                ScaledSum {
                    value: -1e-15,
                    scale: 10.0
                },
                "s"
            )
            .unwrap(),
            0.0
        );
        assert!(matches!(
            nonnegative(
                ScaledSum {
                    value: -1e-3,
                    scale: 10.0
                },
                "s"
            ),
            Err(Error::Invariant(_))
        ));
    }
}
