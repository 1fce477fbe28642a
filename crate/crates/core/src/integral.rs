//! Integral forms over a sign-changing measure `dP = p(t) dt`.
//!
//! `P(x) = ∫_α^x p(t) dt` is tabulated on the grid with the composite
//! trapezoid rule (each cell split into `substeps` panels). Stieltjes
//! integrals use cell masses: `∫ h dP ≈ Σ_j h(m_j) (P(x_{j+1}) − P(x_j))`
//! with `m_j` the cell midpoint. That sum is itself a discrete weighted sum
//! with weights `ΔP_j` whose prefix sums are the node values `P(x_j)`, which
//! is what ties the integral theorems back to the discrete ones.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::engine::{ExponentPair, RatioReport, NOISE_RELATIVE};
use crate::error::{Error, Result};
use crate::model::{
    abel_terms_admissible, min_max, validate_monotone, BoundedMonotoneSeq, Direction,
    MonotoneVerdict, SignedWeights, WeightedInstance,
};
use crate::sum::{CompensatedSum, ScaledSum};

/// Density `p(t)`; may change sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Density {
    Sin,
    Const {
        value: f64,
    },
    /// `Σ c_i t^i`.
    Poly {
        coefficients: Vec<f64>,
    },
    /// Values at equally spaced points spanning `[α, β]`, linearly interpolated.
    Samples {
        values: Vec<f64>,
    },
}

/// An integrand `f` or `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Func {
    Const {
        value: f64,
    },
    /// `intercept + slope · x`.
    Linear {
        intercept: f64,
        slope: f64,
    },
    /// `offset + scale · exp(rate · x)`.
    Exp {
        scale: f64,
        rate: f64,
        #[serde(default)]
        offset: f64,
    },
    Poly {
        coefficients: Vec<f64>,
    },
    /// `min(max(inner, lo), hi)`, either side optional.
    Clamp {
        inner: Box<Func>,
        #[serde(default)]
        lo: Option<f64>,
        #[serde(default)]
        hi: Option<f64>,
    },
    /// Piecewise constant on `values.len()` equal pieces of `[α, β]`.
    Steps {
        values: Vec<f64>,
    },
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Piece index of `x` when `[alpha, beta]` is split into `pieces` equal parts.
fn piece(x: f64, alpha: f64, beta: f64, pieces: usize) -> usize {
    let t = ((x - alpha) / (beta - alpha) * pieces as f64).floor();
    (t.max(0.0) as usize).min(pieces - 1)
}

impl Density {
    fn at(&self, t: f64, alpha: f64, beta: f64) -> f64 {
        match self {
            Density::Sin => t.sin(),
            Density::Const { value } => *value,
            Density::Poly { coefficients } => horner(coefficients, t),
            Density::Samples { values } => {
                let segments = values.len() - 1;
                let s = (t - alpha) / (beta - alpha) * segments as f64;
                let i = (s.floor().max(0.0) as usize).min(segments - 1);
                let frac = s - i as f64;
                values[i] + frac * (values[i + 1] - values[i])
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Density::Samples { values } if values.len() < 2 => Err(Error::Parameter(
                "sampled density needs at least two values".into(),
            )),
            Density::Samples { values }
            | Density::Poly {
                coefficients: values,
            } => finite(values),
            Density::Const { value } => finite(&[*value]),
            Density::Sin => Ok(()),
        }
    }
}

impl Func {
    pub fn at(&self, x: f64, alpha: f64, beta: f64) -> f64 {
        match self {
            Func::Const { value } => *value,
            Func::Linear { intercept, slope } => intercept + slope * x,
            Func::Exp {
                scale,
                rate,
                offset,
            } => offset + scale * (rate * x).exp(),
            Func::Poly { coefficients } => horner(coefficients, x),
            Func::Clamp { inner, lo, hi } => {
                let v = inner.at(x, alpha, beta);
                let v = lo.map_or(v, |lo| v.max(lo));
                hi.map_or(v, |hi| v.min(hi))
            }
            Func::Steps { values } => values[piece(x, alpha, beta, values.len())],
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Func::Steps { values } if values.is_empty() => Err(Error::Empty),
            Func::Steps { values }
            | Func::Poly {
                coefficients: values,
            } => finite(values),
            Func::Clamp { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }
}

fn finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite { index: i + 1 }),
        None => Ok(()),
    }
}

/// A density, a grid and two integrands, with everything the Stieltjes sums
/// need precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureProblem {
    density: Density,
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    substeps: usize,
    f: Func,
    g: Func,
    cumulative: Vec<f64>,
    masses: Vec<f64>,
    f_cells: Vec<f64>,
    g_cells: Vec<f64>,
    tolerance: f64,
}

/// Panels per cell so that the whole interval gets at least this many.
const MIN_PANELS: usize = 1 << 14;

impl QuadratureProblem {
    /// Uniform grid of `cells` cells on `[alpha, beta]`.
    pub fn uniform(
        density: Density,
        alpha: f64,
        beta: f64,
        cells: usize,
        f: Func,
        g: Func,
    ) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Grid("at least one cell is required".into()));
        }
        if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
            return Err(Error::Grid(format!(
                "interval [{alpha}, {beta}] is not a finite increasing interval"
            )));
        }
        let h = (beta - alpha) / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|j| alpha + j as f64 * h).collect();
        nodes[cells] = beta;
        Self::with_nodes(density, nodes, f, g)
    }

    /// Explicit grid `α = x_0 < … < x_N = β`.
    pub fn with_nodes(density: Density, nodes: Vec<f64>, f: Func, g: Func) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Grid("a grid needs at least two nodes".into()));
        }
        if let Some(i) = nodes.iter().position(|x| !x.is_finite()) {
            return Err(Error::Grid(format!("node x_{i} is not finite")));
        }
        if let Some(i) = nodes.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::Grid(format!(
                "nodes must increase strictly: x_{} = {} is not below x_{} = {}",
                i,
                nodes[i],
                i + 1,
                nodes[i + 1]
            )));
        }
        density.validate()?;
        f.validate()?;
        g.validate()?;
        let cells = nodes.len() - 1;
        let substeps = MIN_PANELS.div_ceil(cells);
        let mut problem = QuadratureProblem {
            density,
            alpha: nodes[0],
            beta: nodes[cells],
            nodes,
            substeps,
            f,
            g,
            cumulative: Vec::new(),
            masses: Vec::new(),
            f_cells: Vec::new(),
            g_cells: Vec::new(),
            tolerance: 0.0,
        };
        problem.tabulate();
        Ok(problem)
    }

    /// Overrides the panels per cell used for `P`.
    pub fn with_substeps(mut self, substeps: usize) -> Result<Self> {
        if substeps == 0 {
            return Err(Error::Parameter("substeps must be at least 1".into()));
        }
        self.substeps = substeps;
        self.tabulate();
        Ok(self)
    }

    /// Overrides the admissibility tolerance on `P(x_j)`.
    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance >= 0.0) {
            return Err(Error::Parameter(format!(
                "tolerance must be non-negative, got {tolerance}"
            )));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    fn tabulate(&mut self) {
        let (alpha, beta) = (self.alpha, self.beta);
        let density = |t: f64| self.density.at(t, alpha, beta);
        self.masses = self
            .nodes
            .windows(2)
            .map(|w| {
                let h = (w[1] - w[0]) / self.substeps as f64;
                let mut acc = CompensatedSum::new();
                acc.add(0.5 * density(w[0]));
                for i in 1..self.substeps {
                    acc.add(density(w[0] + i as f64 * h));
                }
                acc.add(0.5 * density(w[1]));
                acc.value() * h
            })
            .collect();
        let mut running = CompensatedSum::new();
        self.cumulative = std::iter::once(0.0)
            .chain(self.masses.iter().map(|m| {
                running.add(*m);
                running.value()
            }))
            .collect();
        let mid: Vec<f64> = self.nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        self.f_cells = mid.iter().map(|&x| self.f.at(x, alpha, beta)).collect();
        self.g_cells = mid.iter().map(|&x| self.g.at(x, alpha, beta)).collect();
        let scale = self.cumulative.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.tolerance = NOISE_RELATIVE * scale;
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cells(&self) -> usize {
        self.masses.len()
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    /// Cell masses `ΔP_j = P(x_{j+1}) − P(x_j)`.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `f` at the cell midpoints.
    pub fn f_cells(&self) -> &[f64] {
        &self.f_cells
    }

    /// `g` at the cell midpoints.
    pub fn g_cells(&self) -> &[f64] {
        &self.g_cells
    }

    /// `10 · h_max · L` with `L` the largest finite-difference slope of `f`
    /// or `g` between adjacent cells: an a-priori allowance for how far the
    /// cell sums may sit from the exact integrals.
    pub fn discretization_tolerance(&self) -> f64 {
        let h_max = self
            .nodes
            .windows(2)
            .fold(0.0f64, |m, w| m.max(w[1] - w[0]));
        let centres: Vec<f64> = self.nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let slope = |v: &[f64]| {
            v.windows(2)
                .zip(centres.windows(2))
                .fold(0.0f64, |m, (y, x)| {
                    m.max(((y[1] - y[0]) / (x[1] - x[0])).abs())
                })
        };
        10.0 * h_max * slope(&self.f_cells).max(slope(&self.g_cells))
    }

    /// First node where `P(x_j) < −tolerance`.
    fn check_admissible(&self) -> Result<()> {
        match self.cumulative.iter().position(|&v| v < -self.tolerance) {
            Some(j) => Err(Error::Inadmissible {
                index: j,
                prefix: self.cumulative[j],
            }),
            None => Ok(()),
        }
    }

    /// `Σ_j v_j ΔP_j`, summed by parts against the node values of `P` so
    /// that monotone integrands give only non-negative terms.
    fn stieltjes<I: IntoIterator<Item = f64>>(&self, values: I) -> ScaledSum {
        let v: Vec<f64> = values.into_iter().collect();
        abel_terms_admissible(&self.cumulative[1..], &v)
    }

    fn nonnegative(&self, sum: ScaledSum, what: &str) -> Result<f64> {
        if sum.is_nonnegative(NOISE_RELATIVE) {
            Ok(sum.value.max(0.0))
        } else {
            Err(Error::Invariant(format!(
                "{what} = {:e} is negative beyond rounding (scale {:e})",
                sum.value, sum.scale
            )))
        }
    }
}

/// `P(x_j)` at every node, starting with `P(α) = 0`.
pub fn cumulative_weight(problem: &QuadratureProblem) -> Vec<f64> {
    problem.cumulative.clone()
}

fn require_monotone(values: &[f64], name: &str, direction: Direction) -> Result<(f64, f64)> {
    let (lo, hi) = min_max(values).ok_or(Error::Empty)?;
    if lo < 0.0 {
        return Err(Error::Precondition(format!(
            "{name} takes the negative value {lo}"
        )));
    }
    match validate_monotone(values, direction, lo, hi)? {
        MonotoneVerdict::Pass => Ok((lo, hi)),
        MonotoneVerdict::Fail(v) => Err(Error::Precondition(format!(
            "{name} is not {direction} on the grid: {v}"
        ))),
    }
}

/// `(∫ f^q dP)^{1/q} (∫ g^p dP)^{1/p} / ∫ f g dP` against the Hölder constant
/// formed from the sampled ranges of `f` and `g`.
pub fn integral_holder_ratio(
    problem: &QuadratureProblem,
    exps: ExponentPair,
) -> Result<RatioReport> {
    problem.check_admissible()?;
    let (a, big_a) = require_monotone(problem.f_cells(), "f", Direction::NonIncreasing)?;
    let (b, big_b) = require_monotone(problem.g_cells(), "g", Direction::NonIncreasing)?;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(
            "f and g must be bounded away from zero".into(),
        ));
    }
    let (p, q) = (exps.p(), exps.q());
    let int_f = problem.nonnegative(
        problem.stieltjes(problem.f_cells.iter().map(|v| v.powf(q))),
        "∫ f^q dP",
    )?;
    let int_g = problem.nonnegative(
        problem.stieltjes(problem.g_cells.iter().map(|v| v.powf(p))),
        "∫ g^p dP",
    )?;
    let cross = problem.stieltjes(
        problem
            .f_cells
            .iter()
            .zip(&problem.g_cells)
            .map(|(x, y)| x * y),
    );
    let denominator = problem.nonnegative(cross, "∫ f g dP")?;
    let numerator = int_f.powf(1.0 / q) * int_g.powf(1.0 / p);
    let bound = bounds::holder_constant(a, big_a, b, big_b, p)?;
    Ok(RatioReport::assemble(numerator, denominator, cross, bound))
}

/// `[(∫ f^p dP)^{1/p} + (∫ g^p dP)^{1/p}] / (∫ (f+g)^p dP)^{1/p}` against
/// `2^{1−1/p}`.
pub fn integral_minkowski_ratio(problem: &QuadratureProblem, p: f64) -> Result<RatioReport> {
    let bound = bounds::minkowski_constant(p)?;
    problem.check_admissible()?;
    require_monotone(problem.f_cells(), "f", Direction::NonIncreasing)?;
    require_monotone(problem.g_cells(), "g", Direction::NonIncreasing)?;
    let int_f = problem.nonnegative(
        problem.stieltjes(problem.f_cells.iter().map(|v| v.powf(p))),
        "∫ f^p dP",
    )?;
    let int_g = problem.nonnegative(
        problem.stieltjes(problem.g_cells.iter().map(|v| v.powf(p))),
        "∫ g^p dP",
    )?;
    let total = problem.stieltjes(
        problem
            .f_cells
            .iter()
            .zip(&problem.g_cells)
            .map(|(x, y)| (x + y).powf(p)),
    );
    let denominator = problem.nonnegative(total, "∫ (f+g)^p dP")?.powf(1.0 / p);
    let numerator = int_f.powf(1.0 / p) + int_g.powf(1.0 / p);
    let scaled = ScaledSum {
        value: denominator,
        scale: total.scale.powf(1.0 / p),
    };
    Ok(RatioReport::assemble(numerator, denominator, scaled, bound))
}

/// `B ∫ f dP − ∫ f g dP` for `f` non-increasing and `g` non-decreasing with
/// `g ≤ B`.
pub fn integral_chebyshev_slack(problem: &QuadratureProblem, big_b: f64) -> Result<ScaledSum> {
    problem.check_admissible()?;
    require_monotone(problem.f_cells(), "f", Direction::NonIncreasing)?;
    let (_, g_hi) = min_max(problem.g_cells()).ok_or(Error::Empty)?;
    match validate_monotone(
        problem.g_cells(),
        Direction::NonDecreasing,
        f64::NEG_INFINITY,
        f64::INFINITY,
    )? {
        MonotoneVerdict::Pass => {}
        MonotoneVerdict::Fail(v) => {
            return Err(Error::Precondition(format!(
                "g is not non-decreasing on the grid: {v}"
            )))
        }
    }
    if g_hi > big_b {
        return Err(Error::Precondition(format!(
            "g reaches {g_hi}, above B = {big_b}"
        )));
    }
    Ok(problem.stieltjes(
        problem
            .f_cells
            .iter()
            .zip(&problem.g_cells)
            .map(|(f, g)| f * (big_b - g)),
    ))
}

/// The discrete instance with weights `ΔP_j` and sequences `f(m_j)`, `g(m_j)`.
///
/// Both sequences are declared with their observed ranges. Weights are
/// accepted with the problem's tolerance on `P`; failures name the node.
pub fn discretize(problem: &QuadratureProblem) -> Result<WeightedInstance> {
    problem.check_admissible()?;
    let weights = SignedWeights::new(problem.masses.clone(), problem.tolerance)?;
    let seq = |values: &[f64]| BoundedMonotoneSeq::tight_any(values.to_vec());
    WeightedInstance::new(weights, seq(&problem.f_cells)?, seq(&problem.g_cells)?)
}

/// Built-in demonstration problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// `p(t) = sin t` on `[0, 2π]`, `f = 2 − x/2π`, `g = 3 − x/π`.
    Sin,
    /// `p ≡ 1` on `[0, 1]`, `f = 2 − x`, `g = 1 + e^{−x}`.
    Const,
    /// `p(t) = sin t` on `[0, 4π]`, step integrands constant on the
    /// half-periods.
    Piecewise,
    /// `p(t) = sin t` on `[0, 2π]`, `f = e^{−x}`, `g = min(x, 2)`; for the
    /// Chebyshev-type slack with `B = 2`.
    SinLemma,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Sin,
        Builtin::Const,
        Builtin::Piecewise,
        Builtin::SinLemma,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Builtin::Sin => "sin",
            Builtin::Const => "const",
            Builtin::Piecewise => "piecewise",
            Builtin::SinLemma => "sin-lemma",
        }
    }

    pub fn parse(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.as_str() == name)
    }

    /// The problem on `cells` uniform cells. The piecewise problem needs a
    /// multiple of 4 to keep the steps aligned with cells.
    pub fn problem(self, cells: usize) -> Result<QuadratureProblem> {
        let spec = self.spec(cells);
        spec.build()
    }

    pub fn spec(self, cells: usize) -> ProblemSpec {
        let linear = |intercept, slope| Func::Linear { intercept, slope };
        let (density, beta, f, g) = match self {
            Builtin::Sin => (
                Density::Sin,
                2.0 * PI,
                linear(2.0, -0.5 / PI),
                linear(3.0, -1.0 / PI),
            ),
            Builtin::Const => (
                Density::Const { value: 1.0 },
                1.0,
                linear(2.0, -1.0),
                Func::Exp {
                    scale: 1.0,
                    rate: -1.0,
                    offset: 1.0,
                },
            ),
            Builtin::Piecewise => (
                Density::Sin,
                4.0 * PI,
                Func::Steps {
                    values: vec![4.0, 3.0, 2.0, 1.0],
                },
                Func::Steps {
                    values: vec![3.0, 3.0, 1.0, 1.0],
                },
            ),
            Builtin::SinLemma => (
                Density::Sin,
                2.0 * PI,
                Func::Exp {
                    scale: 1.0,
                    rate: -1.0,
                    offset: 0.0,
                },
                Func::Clamp {
                    inner: Box::new(linear(0.0, 1.0)),
                    lo: None,
                    hi: Some(2.0),
                },
            ),
        };
        ProblemSpec {
            density,
            alpha: 0.0,
            beta: Endpoint::Finite(beta),
            truncation: None,
            cells,
            f,
            g,
        }
    }
}

/// Right endpoint as written in a problem file: a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    Finite(f64),
    Infinite,
}

impl Serialize for Endpoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Endpoint::Finite(v) => s.serialize_f64(*v),
            Endpoint::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Endpoint::Finite(v)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "+inf") => {
                Ok(Endpoint::Infinite)
            }
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "beta must be a number or \"inf\", got \"{t}\""
            ))),
        }
    }
}

/// Default truncation of an infinite interval: four full periods of `sin`,
/// where `P = 1 − cos` returns to zero.
pub const DEFAULT_TRUNCATION: f64 = 8.0 * PI;

/// Problem file contents.
///
/// ```json
/// {"density": {"kind": "sin"}, "alpha": 0, "beta": "inf", "N": 10000,
///  "f": {"kind": "exp", "scale": 1, "rate": -0.1, "offset": 1},
///  "g": {"kind": "linear", "intercept": 2, "slope": -0.01}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub density: Density,
    pub alpha: f64,
    pub beta: Endpoint,
    /// Where an infinite `beta` is cut; defaults to [`DEFAULT_TRUNCATION`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<f64>,
    #[serde(rename = "N")]
    pub cells: usize,
    pub f: Func,
    pub g: Func,
}

impl ProblemSpec {
    /// The finite right endpoint actually integrated to.
    pub fn effective_beta(&self) -> f64 {
        match self.beta {
            Endpoint::Finite(b) => b,
            Endpoint::Infinite => self.alpha + self.truncation.unwrap_or(DEFAULT_TRUNCATION),
        }
    }

    pub fn with_cells(&self, cells: usize) -> ProblemSpec {
        ProblemSpec {
            cells,
            ..self.clone()
        }
    }

    pub fn build(&self) -> Result<QuadratureProblem> {
        QuadratureProblem::uniform(
            self.density.clone(),
            self.alpha,
            self.effective_beta(),
            self.cells,
            self.f.clone(),
            self.g.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;
    use approx::assert_relative_eq;

    fn unit(density: Density, cells: usize) -> QuadratureProblem {
        let one = Func::Const { value: 1.0 };
        QuadratureProblem::uniform(density, 0.0, 1.0, cells, one.clone(), one).unwrap()
    }

    #[test]
    fn constant_density_is_exact() {
        let p = unit(Density::Const { value: 1.0 }, 7);
        for (x, v) in p.nodes().iter().zip(cumulative_weight(&p)) {
            assert_relative_eq!(v, *x, epsilon = 1e-15);
        }
    }

    #[test]
    fn sin_density_tracks_one_minus_cos() {
        let one = Func::Const { value: 1.0 };
        let p = QuadratureProblem::uniform(Density::Sin, 0.0, 2.0 * PI, 10_000, one.clone(), one)
            .unwrap();
        let err = p
            .nodes()
            .iter()
            .zip(cumulative_weight(&p))
            .fold(0.0f64, |m, (x, v)| m.max((v - (1.0 - x.cos())).abs()));
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn linear_density_matches_closed_form() {
        let p = unit(
            Density::Poly {
                coefficients: vec![0.0, 1.0],
            },
            1000,
        );
        for (x, v) in p.nodes().iter().zip(cumulative_weight(&p)) {
            assert!((v - x * x / 2.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn sampled_density_interpolates() {
        let p = unit(
            Density::Samples {
                values: vec![0.0, 1.0],
            },
            10,
        );
        assert_relative_eq!(*cumulative_weight(&p).last().unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn bad_grids() {
        let one = Func::Const { value: 1.0 };
        let bad = QuadratureProblem::with_nodes(
            Density::Sin,
            vec![0.0, 1.0, 1.0],
            one.clone(),
            one.clone(),
        );
        assert!(matches!(bad, Err(Error::Grid(_))));
        let bad = QuadratureProblem::uniform(Density::Sin, 1.0, 0.0, 4, one.clone(), one);
        assert!(matches!(bad, Err(Error::Grid(_))));
    }

    #[test]
    fn unit_integrands_give_unit_ratios() {
        let one = Func::Const { value: 1.0 };
        let p =
            QuadratureProblem::uniform(Density::Sin, 0.0, 3.0 * PI, 999, one.clone(), one.clone())
                .unwrap();
        let h = integral_holder_ratio(&p, ExponentPair::new(2.0).unwrap()).unwrap();
        assert_relative_eq!(h.ratio, 1.0, epsilon = 1e-12);
        let m = integral_minkowski_ratio(&p, 3.0).unwrap();
        assert_relative_eq!(m.ratio, 1.0, epsilon = 1e-12);
        // a full period has no mass at all
        let p = QuadratureProblem::uniform(Density::Sin, 0.0, 2.0 * PI, 1000, one.clone(), one)
            .unwrap();
        assert!(integral_minkowski_ratio(&p, 2.0).unwrap().degenerate);
    }

    #[test]
    fn single_cell_matches_discrete() {
        let f = Func::Const { value: 2.0 };
        let g = Func::Const { value: 3.0 };
        let p =
            QuadratureProblem::uniform(Density::Const { value: 0.5 }, 0.0, 1.0, 1, f, g).unwrap();
        let e = ExponentPair::new(2.0).unwrap();
        let inst = discretize(&p).unwrap();
        let discrete = engine::holder_ratio(&inst, e).unwrap();
        let integral = integral_holder_ratio(&p, e).unwrap();
        assert_relative_eq!(integral.ratio, discrete.ratio, max_relative = 1e-12);
    }

    #[test]
    fn sin_cells_alternate() {
        let one = Func::Const { value: 1.0 };
        let p =
            QuadratureProblem::uniform(Density::Sin, 0.0, 4.0 * PI, 4, one.clone(), one).unwrap();
        let masses = p.masses();
        for (k, m) in masses.iter().enumerate() {
            let expected = if k % 2 == 0 { 2.0 } else { -2.0 };
            assert!((m - expected).abs() < 1e-7, "{m}");
        }
        let inst = discretize(&p).unwrap();
        let prefix = inst.weights().prefix_sums();
        assert!(prefix[1].abs() < 1e-12 && prefix[3].abs() < 1e-12);
    }

    #[test]
    fn inadmissible_density_names_node() {
        let one = Func::Const { value: 1.0 };
        let p = QuadratureProblem::uniform(
            Density::Const { value: -1.0 },
            0.0,
            1.0,
            4,
            one.clone(),
            one,
        )
        .unwrap();
        assert!(matches!(
            integral_minkowski_ratio(&p, 2.0),
            Err(Error::Inadmissible { index: 1, .. })
        ));
        assert!(matches!(
            discretize(&p),
            Err(Error::Inadmissible { index: 1, .. })
        ));
    }

    #[test]
    fn piecewise_matches_discrete_exactly() {
        let p = Builtin::Piecewise.problem(8).unwrap();
        let inst = discretize(&p).unwrap();
        let a = integral_minkowski_ratio(&p, 2.0).unwrap();
        let b = engine::minkowski_ratio(&inst, 2.0).unwrap();
        assert_relative_eq!(a.ratio, b.ratio, max_relative = 1e-12);
    }

    #[test]
    fn chebyshev_slack_cases() {
        let p = Builtin::SinLemma.problem(2000).unwrap();
        let s = integral_chebyshev_slack(&p, 2.0).unwrap();
        assert!(s.value >= -1e-8);
        let f = Func::Exp {
            scale: 1.0,
            rate: -1.0,
            offset: 0.0,
        };
        let g = Func::Const { value: 2.0 };
        let p = QuadratureProblem::uniform(Density::Sin, 0.0, 2.0 * PI, 500, f, g).unwrap();
        assert_eq!(integral_chebyshev_slack(&p, 2.0).unwrap().value, 0.0);
        assert!(matches!(
            integral_chebyshev_slack(&p, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sin_demo_within_bounds() {
        let p = Builtin::Sin.problem(10_000).unwrap();
        let h = integral_holder_ratio(&p, ExponentPair::new(2.0).unwrap()).unwrap();
        assert!(h.ratio >= 0.0 && h.ratio <= h.bound + 1e-6);
        let m = integral_minkowski_ratio(&p, 2.0).unwrap();
        assert!(m.ratio <= 2f64.sqrt() + 1e-6);
    }

    #[test]
    fn increasing_integrand_is_rejected() {
        let f = Func::Linear {
            intercept: 1.0,
            slope: 1.0,
        };
        let p = QuadratureProblem::uniform(Density::Sin, 0.0, PI, 10, f.clone(), f).unwrap();
        assert!(matches!(
            integral_minkowski_ratio(&p, 2.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn problem_file_round_trip() {
        let text = r#"{"density": {"kind": "sin"}, "alpha": 0, "beta": "inf", "N": 64,
            "f": {"kind": "exp", "scale": 1, "rate": -0.1, "offset": 1},
            "g": {"kind": "linear", "intercept": 2, "slope": -0.01}}"#;
        let spec: ProblemSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.beta, Endpoint::Infinite);
        assert_relative_eq!(spec.effective_beta(), DEFAULT_TRUNCATION);
        let back: ProblemSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        assert!(
            serde_json::from_str::<ProblemSpec>(&text.replace("\"inf\"", "\"forever\"")).is_err()
        );
    }
}
