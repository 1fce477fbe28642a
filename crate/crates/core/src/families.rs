//! Explicit constructions: zero-numerator and blow-up families for the
//! Hölder ratio, the decaying and the near-sharp families for the Minkowski
//! ratio.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::engine::{self, ExponentPair, RatioReport};
use crate::error::{Error, Result};
use crate::model::{BoundedMonotoneSeq, Direction, SignedWeights, WeightedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    HolderCollapse,
    HolderBlowup,
    MinkowskiCollapse,
    MinkowskiSharp,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [
        FamilyId::HolderCollapse,
        FamilyId::HolderBlowup,
        FamilyId::MinkowskiCollapse,
        FamilyId::MinkowskiSharp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::HolderCollapse => "holder-collapse",
            FamilyId::HolderBlowup => "holder-blowup",
            FamilyId::MinkowskiCollapse => "minkowski-collapse",
            FamilyId::MinkowskiSharp => "minkowski-sharp",
        }
    }

    /// Name of the swept parameter.
    pub fn parameter(self) -> &'static str {
        match self {
            FamilyId::HolderCollapse | FamilyId::MinkowskiSharp => "n",
            FamilyId::HolderBlowup => "delta",
            FamilyId::MinkowskiCollapse => "b",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown family `{s}`")))
    }
}

/// What the construction predicts about its ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    /// The ratio equals this closed-form value.
    Ratio(f64),
    /// The ratio is at least this value.
    AtLeast(f64),
}

impl Prediction {
    pub fn value(self) -> f64 {
        match self {
            Prediction::Ratio(v) | Prediction::AtLeast(v) => v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyInstance {
    pub instance: WeightedInstance,
    pub family: FamilyId,
    pub parameters: Vec<(&'static str, f64)>,
    /// Exponent the ratio is evaluated at.
    pub p: f64,
    pub prediction: Prediction,
    /// Set when the construction departs from the hypotheses of the bound
    /// it is compared with.
    pub discrepancy_note: Option<String>,
}

impl FamilyInstance {
    /// Evaluates the ratio this family is about.
    pub fn evaluate(&self) -> Result<RatioReport> {
        match self.family {
            FamilyId::HolderCollapse => {
                engine::holder_ratio_unchecked(&self.instance, ExponentPair::new(self.p)?)
            }
            FamilyId::HolderBlowup => {
                engine::holder_ratio(&self.instance, ExponentPair::new(self.p)?)
            }
            FamilyId::MinkowskiCollapse | FamilyId::MinkowskiSharp => {
                engine::minkowski_ratio(&self.instance, self.p)
            }
        }
    }

    /// Value of a named entry of `parameters`.
    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
    }

    /// Gap to the best-possible constant, `2^{1-1/p} - ratio`, for the
    /// near-sharp Minkowski family.
    pub fn epsilon(&self) -> Option<f64> {
        match (self.family, self.prediction) {
            (FamilyId::MinkowskiSharp, Prediction::Ratio(r)) => {
                bounds::minkowski_constant(self.p).ok().map(|c| c - r)
            }
            _ => None,
        }
    }
}

fn require_exponent_above_one(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "this construction needs finite p > 1, got {p}"
        )))
    }
}

/// Alternating weights with `a = (a_1, a_1, a_3, a_3, ...)` built from
/// `a_pairs`. Each pair contributes `a^q - a^q = 0` to the first factor of
/// the numerator, so the Hölder ratio is exactly 0 while the denominator
/// `sum a_{2k-1} (b_{2k-1} - b_{2k})` stays positive.
///
/// `b` must be non-increasing and positive with at least one strict drop
/// inside a pair. Pairs given in increasing order reproduce the classical
/// construction, which is non-decreasing and so flagged in
/// `discrepancy_note`.
pub fn holder_collapse(a_pairs: &[f64], b: &[f64], p: f64) -> Result<FamilyInstance> {
    require_exponent_above_one(p)?;
    if a_pairs.is_empty() {
        return Err(Error::Empty);
    }
    let n = 2 * a_pairs.len();
    if b.len() != n {
        return Err(Error::Length {
            expected: n,
            found: b.len(),
        });
    }
    if let Some(i) = a_pairs.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Parameter(format!(
            "pair value {} must be positive",
            i + 1
        )));
    }
    let b_seq = BoundedMonotoneSeq::tight(b.to_vec(), Direction::NonIncreasing)?;
    if !(b_seq.lo() > 0.0) {
        return Err(Error::Parameter("b must be positive".into()));
    }
    if b.chunks(2).all(|pair| pair[0] == pair[1]) {
        return Err(Error::Degenerate(
            "every pair difference b_{2k-1} - b_{2k} is zero; the denominator vanishes".into(),
        ));
    }
    let a: Vec<f64> = a_pairs.iter().flat_map(|&x| [x, x]).collect();
    let a_seq = BoundedMonotoneSeq::tight_any(a)?;
    let discrepancy_note =
        (a_seq.direction() == Direction::NonDecreasing && a_seq.lo() < a_seq.hi()).then(|| {
            "a is non-decreasing; the Hölder upper bound assumes non-increasing sequences, \
         so only the zero-ratio prediction applies"
                .to_string()
        });
    Ok(FamilyInstance {
        instance: WeightedInstance::new(SignedWeights::alternating(n)?, a_seq, b_seq)?,
        family: FamilyId::HolderCollapse,
        parameters: vec![("n", n as f64)],
        p,
        prediction: Prediction::Ratio(0.0),
        discrepancy_note,
    })
}

/// Alternating weights over `n = 2m + 1` terms, `a ≡ 1`, and
/// `b = b_head ++ [b_tail]`. The Hölder ratio is at least
///
/// `p^{1/p} (b_{2m} / D)^{1 - 1/p}`,  `D = sum_{k<=m} (b_{2k-1} - b_{2k})`,
///
/// once `b_tail` is negligible, and grows without bound as the pair drops
/// shrink. The predicted lower estimate multiplies this by `D / (D + b_tail)`,
/// which keeps it a true lower bound for any positive tail; the tail-free
/// value is kept in `parameters` as `estimate`.
pub fn holder_blowup(b_head: &[f64], b_tail: f64, p: f64) -> Result<FamilyInstance> {
    require_exponent_above_one(p)?;
    if b_head.is_empty() || !b_head.len().is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "b_head must hold 2m > 0 values, got {}",
            b_head.len()
        )));
    }
    let mut b = b_head.to_vec();
    b.push(b_tail);
    let n = b.len();
    let b_seq = BoundedMonotoneSeq::tight(b, Direction::NonIncreasing)
        .map_err(|e| Error::Precondition(format!("b: {e}")))?;
    if !(b_seq.lo() > 0.0) {
        return Err(Error::Precondition("b must be positive".into()));
    }
    let drop: f64 = b_head.chunks(2).map(|pair| pair[0] - pair[1]).sum();
    if !(drop > 0.0) {
        return Err(Error::Degenerate(
            "the pair drops of b_head sum to zero".into(),
        ));
    }
    let last = b_head[b_head.len() - 1];
    let estimate = p.powf(1.0 / p) * (last / drop).powf(1.0 - 1.0 / p);
    let lower = estimate * drop / (drop + b_tail);
    Ok(FamilyInstance {
        instance: WeightedInstance::new(
            SignedWeights::alternating(n)?,
            BoundedMonotoneSeq::constant(1.0, n)?,
            b_seq,
        )?,
        family: FamilyId::HolderBlowup,
        parameters: vec![
            ("m", (n / 2) as f64),
            ("b_tail", b_tail),
            ("estimate", estimate),
        ],
        p,
        prediction: Prediction::AtLeast(lower),
        discrepancy_note: None,
    })
}

/// [`holder_blowup`] with `m = 1` and `b_head = (1, 1 - delta)`.
pub fn holder_blowup_delta(delta: f64, b_tail: f64, p: f64) -> Result<FamilyInstance> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let mut f = holder_blowup(&[1.0, 1.0 - delta], b_tail, p)?;
    f.parameters.insert(0, ("delta", delta));
    Ok(f)
}

/// Largest `b` accepted by [`minkowski_collapse`].
pub const MINKOWSKI_COLLAPSE_MAX_B: f64 = 1e100;

/// Alternating weights, `a = (1, 1, 0, ...)`, `b = (b, 0, ...)`.
/// The Minkowski ratio is `b / ((1+b)^p - 1)^{1/p} < b^{1-1/p}`, which tends
/// to 0 with `b`, so no positive lower bound depending on `p` alone exists.
pub fn minkowski_collapse(b: f64, p: f64, n: usize) -> Result<FamilyInstance> {
    require_exponent_above_one(p)?;
    if !(b > 0.0 && b <= MINKOWSKI_COLLAPSE_MAX_B) {
        return Err(Error::Parameter(format!(
            "b must lie in (0, {MINKOWSKI_COLLAPSE_MAX_B:e}], got {b}"
        )));
    }
    if n < 2 {
        return Err(Error::Parameter(format!("n must be at least 2, got {n}")));
    }
    let mut a = vec![0.0; n];
    a[0] = 1.0;
    a[1] = 1.0;
    let mut bs = vec![0.0; n];
    bs[0] = b;
    let predicted = b / ((1.0 + b).powf(p) - 1.0).powf(1.0 / p);
    Ok(FamilyInstance {
        instance: WeightedInstance::new(
            SignedWeights::alternating(n)?,
            BoundedMonotoneSeq::tight(a, Direction::NonIncreasing)?,
            BoundedMonotoneSeq::tight(bs, Direction::NonIncreasing)?,
        )?,
        family: FamilyId::MinkowskiCollapse,
        parameters: vec![("b", b), ("n", n as f64)],
        p,
        prediction: Prediction::Ratio(predicted),
        discrepancy_note: None,
    })
}

/// Unit weights, `a` all ones, `b = (n^{1/p}, 0, ..., 0)`. The Minkowski
/// ratio is `2 (1 - 1/n + (1 + n^{-1/p})^p)^{-1/p}`, below `2^{1-1/p}` by an
/// `epsilon` that vanishes as `n` grows: the constant cannot be improved.
pub fn minkowski_sharp(n: usize, p: f64) -> Result<FamilyInstance> {
    require_exponent_above_one(p)?;
    if n < 1 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let nf = n as f64;
    let mut b = vec![0.0; n];
    b[0] = nf.powf(1.0 / p);
    let predicted = 2.0 * (1.0 - 1.0 / nf + (1.0 + nf.powf(-1.0 / p)).powf(p)).powf(-1.0 / p);
    Ok(FamilyInstance {
        instance: WeightedInstance::new(
            SignedWeights::uniform(n)?,
            BoundedMonotoneSeq::constant(1.0, n)?,
            BoundedMonotoneSeq::tight(b, Direction::NonIncreasing)?,
        )?,
        family: FamilyId::MinkowskiSharp,
        parameters: vec![("n", nf)],
        p,
        prediction: Prediction::Ratio(predicted),
        discrepancy_note: None,
    })
}

/// Geometric grid from `from` to `to` (inclusive, either order) with
/// `points_per_decade` points per factor of ten.
pub fn geometric_grid(from: f64, to: f64, points_per_decade: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to > 0.0) || !from.is_finite() || !to.is_finite() {
        return Err(Error::Parameter(format!(
            "grid endpoints must be positive, got {from} and {to}"
        )));
    }
    if points_per_decade == 0 {
        return Err(Error::Parameter(
            "points per decade must be positive".into(),
        ));
    }
    let (l0, l1) = (from.log10(), to.log10());
    let steps = ((l1 - l0).abs() * points_per_decade as f64 - 1e-9)
        .ceil()
        .max(0.0) as usize;
    if steps == 0 {
        return Ok(vec![from]);
    }
    Ok((0..=steps)
        .map(|i| match i {
            0 => from,
            i if i == steps => to,
            i => 10f64.powf(l0 + (l1 - l0) * i as f64 / steps as f64),
        })
        .collect())
}

/// Geometric grid rounded to distinct integers (optionally even ones).
pub fn integer_grid(
    from: usize,
    to: usize,
    points_per_decade: usize,
    even: bool,
) -> Result<Vec<usize>> {
    let grid = geometric_grid(from as f64, to as f64, points_per_decade)?;
    let mut out: Vec<usize> = Vec::with_capacity(grid.len());
    for v in grid {
        let mut k = v.round() as usize;
        if even {
            k += k % 2;
        }
        if out.last() != Some(&k) {
            out.push(k);
        }
    }
    Ok(out)
}

/// Settings shared by every sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: FamilyId,
    pub p: f64,
    pub grid: Vec<f64>,
    /// Tail value for the blow-up family.
    pub b_tail: f64,
    /// Sequence length for the Minkowski decay family.
    pub n: usize,
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: FamilyId,
    pub parameter: f64,
    pub p: f64,
    pub predicted: f64,
    pub computed: f64,
    pub bound: f64,
    pub slack: f64,
}

/// Builds the family member for one grid value.
pub fn build(config: &SweepConfig, value: f64) -> Result<FamilyInstance> {
    match config.family {
        FamilyId::HolderCollapse => {
            let n = value.round() as usize;
            if n < 2 || !n.is_multiple_of(2) {
                return Err(Error::Parameter(format!(
                    "n must be even and >= 2, got {value}"
                )));
            }
            let pairs: Vec<f64> = (1..=n / 2).map(|k| k as f64).collect();
            let b: Vec<f64> = (1..=n).rev().map(|k| k as f64).collect();
            holder_collapse(&pairs, &b, config.p)
        }
        FamilyId::HolderBlowup => holder_blowup_delta(value, config.b_tail, config.p),
        FamilyId::MinkowskiCollapse => minkowski_collapse(value, config.p, config.n),
        FamilyId::MinkowskiSharp => minkowski_sharp(value.round() as usize, config.p),
    }
}

/// Evaluates every grid point, in parallel; row order follows the grid.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.grid.is_empty() {
        return Err(Error::Parameter("empty sweep grid".into()));
    }
    config
        .grid
        .par_iter()
        .map(|&value| {
            let family = build(config, value)?;
            let report = family.evaluate()?;
            Ok(SweepRow {
                family: config.family,
                parameter: value,
                p: config.p,
                predicted: family.prediction.value(),
                computed: report.ratio,
                bound: report.bound,
                slack: report.slack,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn holder_collapse_examples() {
        let f = holder_collapse(&[1.0, 2.0], &[4.0, 3.0, 2.0, 1.0], 2.0).unwrap();
        let r = f.evaluate().unwrap();
        assert_eq!(r.numerator, 0.0);
        assert_eq!(r.ratio, 0.0);
        assert_eq!(r.denominator, 1.0 * 1.0 + 2.0 * 1.0);
        assert!(f.discrepancy_note.is_some());

        let f = holder_collapse(&[1.0], &[2.0, 1.0], 2.0).unwrap();
        assert_eq!(f.evaluate().unwrap().ratio, 0.0);
        assert!(f.discrepancy_note.is_none());
    }

    #[test]
    fn holder_collapse_rejects_flat_pairs() {
        assert!(matches!(
            holder_collapse(&[1.0, 2.0], &[3.0, 3.0, 1.0, 1.0], 2.0),
            Err(Error::Degenerate(_))
        ));
        assert!(holder_collapse(&[1.0], &[1.0, 2.0], 2.0).is_err());
    }

    #[test]
    fn holder_blowup_estimates() {
        let delta = 1e-3;
        let f = holder_blowup(&[1.0, 1.0 - delta], 1e-9, 2.0).unwrap();
        let lower = f.prediction.value();
        let estimate = f.parameter("estimate").unwrap();
        assert_relative_eq!(
            estimate,
            2f64.sqrt() * ((1.0 - delta) / delta).sqrt(),
            max_relative = 1e-12
        );
        assert!(lower < estimate && lower > estimate * (1.0 - 1e-5));
        assert!(f.evaluate().unwrap().ratio >= lower - 1e-9);

        let f = holder_blowup(&[1.0, 0.5], 1e-12, 2.0).unwrap();
        assert_relative_eq!(
            f.parameter("estimate").unwrap(),
            2f64.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(f.prediction.value(), 2f64.sqrt(), max_relative = 1e-11);

        let mut prev = 0.0;
        for k in 1..=6 {
            let e = holder_blowup_delta(10f64.powi(-k), 1e-15, 2.0)
                .unwrap()
                .prediction
                .value();
            assert!(e > prev);
            prev = e;
        }
        assert!(matches!(
            holder_blowup(&[1.0, 2.0], 0.1, 2.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn minkowski_collapse_examples() {
        let f = minkowski_collapse(1.0, 2.0, 2).unwrap();
        let r = f.evaluate().unwrap();
        assert_relative_eq!(r.ratio, 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.ratio, f.prediction.value(), max_relative = 1e-12);

        let r = minkowski_collapse(0.01, 2.0, 6)
            .unwrap()
            .evaluate()
            .unwrap();
        assert!(r.ratio < 0.1);
        assert!(minkowski_collapse(0.5, 1.0, 4).is_err());
        assert!(minkowski_collapse(0.0, 2.0, 4).is_err());
        assert!(minkowski_collapse(0.5, 2.0, 1).is_err());
    }

    #[test]
    fn minkowski_sharp_examples() {
        let f = minkowski_sharp(1, 2.0).unwrap();
        assert_eq!(f.evaluate().unwrap().ratio, 1.0);
        assert_relative_eq!(
            f.epsilon().unwrap(),
            2f64.sqrt() - 1.0,
            max_relative = 1e-14
        );

        let f = minkowski_sharp(100, 2.0).unwrap();
        assert_relative_eq!(
            f.prediction.value(),
            2.0 / 2.2f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            f.evaluate().unwrap().ratio,
            f.prediction.value(),
            max_relative = 1e-12
        );
        assert_relative_eq!(f.epsilon().unwrap(), 0.06581, epsilon = 1e-5);

        let mut prev = f64::INFINITY;
        for n in [1, 10, 100, 1000, 10000] {
            let e = minkowski_sharp(n, 2.0).unwrap().epsilon().unwrap();
            assert!(e > 0.0 && e < prev);
            prev = e;
        }
    }

    #[test]
    fn grids() {
        let g = geometric_grid(1e-6, 1e-1, 8).unwrap();
        assert_eq!(g.len(), 41);
        assert_eq!((g[0], g[40]), (1e-6, 1e-1));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let down = geometric_grid(1e-1, 1e-6, 8).unwrap();
        assert!(down.windows(2).all(|w| w[1] < w[0]));
        let n = integer_grid(1, 10_000, 8, false).unwrap();
        assert_eq!((n[0], *n.last().unwrap()), (1, 10_000));
        assert!(n.windows(2).all(|w| w[1] > w[0]));
        assert!(integer_grid(2, 64, 4, true)
            .unwrap()
            .iter()
            .all(|k| k % 2 == 0));
        assert_eq!(geometric_grid(5.0, 5.0, 8).unwrap(), vec![5.0]);
        assert!(geometric_grid(0.0, 1.0, 8).is_err());
    }

    #[test]
    fn sweep_preserves_order() {
        let config = SweepConfig {
            family: FamilyId::MinkowskiSharp,
            p: 2.0,
            grid: vec![1.0, 10.0, 100.0],
            b_tail: 0.0,
            n: 0,
        };
        let rows = sweep(&config).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.parameter).collect::<Vec<_>>(),
            config.grid
        );
        assert!(rows.windows(2).all(|w| w[1].computed > w[0].computed));
        assert!(sweep(&SweepConfig {
            grid: vec![],
            ..config
        })
        .is_err());
    }
}
