//! JSON instance files.
//!
//! ```json
//! {"weights": [1, -1, 1], "a": [3, 2, 1], "b": [4, 1, 1],
//!  "a_bounds": [1, 3], "b_bounds": [1, 4], "direction": "non_increasing"}
//! ```
//!
//! Bounds default to the observed range. `b_direction` overrides the
//! direction of `b` alone (the Chebyshev-type slack wants it non-decreasing).
//! `sequences` and `exponent_weights` feed the multi-sequence ratio; without
//! them it uses `a` and `b` with weights `1/2, 1/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundedMonotoneSeq, Direction, SignedWeights, WeightedInstance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub weights: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_bounds: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_bounds: Option<[f64; 2]>,
    #[serde(default = "non_increasing")]
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_direction: Option<Direction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent_weights: Option<Vec<f64>>,
}

fn non_increasing() -> Direction {
    Direction::NonIncreasing
}

fn sequence(
    values: &[f64],
    direction: Direction,
    bounds: Option<[f64; 2]>,
) -> Result<BoundedMonotoneSeq> {
    match bounds {
        Some([lo, hi]) => BoundedMonotoneSeq::new(values.to_vec(), direction, lo, hi),
        None => BoundedMonotoneSeq::tight(values.to_vec(), direction),
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &WeightedInstance) -> Self {
        InstanceFile {
            weights: inst.weights().values().to_vec(),
            a: inst.a().values().to_vec(),
            b: inst.b().values().to_vec(),
            a_bounds: Some([inst.a().lo(), inst.a().hi()]),
            b_bounds: Some([inst.b().lo(), inst.b().hi()]),
            direction: inst.a().direction(),
            b_direction: (inst.b().direction() != inst.a().direction())
                .then_some(inst.b().direction()),
            tolerance: None,
            sequences: None,
            exponent_weights: None,
        }
    }

    pub fn signed_weights(&self) -> Result<SignedWeights> {
        let tolerance = self.tolerance.unwrap_or(0.0);
        if let Some(i) = self.weights.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i + 1 });
        }
        SignedWeights::new(self.weights.clone(), tolerance)
    }

    pub fn instance(&self) -> Result<WeightedInstance> {
        let weights = self.signed_weights()?;
        let a = sequence(&self.a, self.direction, self.a_bounds)?;
        let b = sequence(
            &self.b,
            self.b_direction.unwrap_or(self.direction),
            self.b_bounds,
        )?;
        WeightedInstance::new(weights, a, b)
    }

    /// Sequences and exponent weights for the multi-sequence ratio.
    pub fn multi(&self) -> Result<(Vec<BoundedMonotoneSeq>, Vec<f64>)> {
        let raw: Vec<&[f64]> = match &self.sequences {
            Some(s) => s.iter().map(Vec::as_slice).collect(),
            None => vec![&self.a, &self.b],
        };
        let seqs = raw
            .iter()
            .map(|v| BoundedMonotoneSeq::tight(v.to_vec(), self.direction))
            .collect::<Result<Vec<_>>>()?;
        let w = match &self.exponent_weights {
            Some(w) => w.clone(),
            None => vec![1.0 / seqs.len() as f64; seqs.len()],
        };
        Ok((seqs, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_file() {
        let f: InstanceFile =
            serde_json::from_str(r#"{"weights": [1, -1, 1], "a": [3, 2, 1], "b": [4, 1, 1]}"#)
                .unwrap();
        let inst = f.instance().unwrap();
        assert_eq!((inst.a().lo(), inst.a().hi()), (1.0, 3.0));
        assert_eq!(inst.b().direction(), Direction::NonIncreasing);
    }

    #[test]
    fn round_trips_instance() {
        let inst = WeightedInstance::new(
            SignedWeights::alternating(3).unwrap(),
            BoundedMonotoneSeq::new(vec![3.0, 2.0, 1.0], Direction::NonIncreasing, 0.5, 3.0)
                .unwrap(),
            BoundedMonotoneSeq::tight(vec![0.0, 1.0, 2.0], Direction::NonDecreasing).unwrap(),
        )
        .unwrap();
        let file = InstanceFile::from_instance(&inst);
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"b_direction\":\"non_decreasing\""));
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.instance().unwrap(), inst);
    }

    #[test]
    fn errors_name_the_problem() {
        let err =
            serde_json::from_str::<InstanceFile>(r#"{"weights": [1], "a": [1]}"#).unwrap_err();
        assert!(err.to_string().contains("`b`"));
        let err =
            serde_json::from_str::<InstanceFile>(r#"{"weights": [1], "a": [1], "b": [1], "c": 1}"#)
                .unwrap_err();
        assert!(err.to_string().contains("`c`"));
        let f: InstanceFile =
            serde_json::from_str(r#"{"weights": [-1, 2], "a": [1, 1], "b": [1, 1]}"#).unwrap();
        assert!(matches!(
            f.instance(),
            Err(Error::Inadmissible { index: 1, .. })
        ));
    }
}
