//! Projected random-restart local search for the largest ratio/bound.
//!
//! Each candidate is kept feasible: weights live in the admissible cone via
//! their clipped partial sums, sequences are projected onto the monotone cone
//! inside the box. A restart is a hill climb with Gaussian coordinate moves
//! and an adaptive step. Restarts draw from independent ChaCha streams keyed
//! by `(seed, restart)` and run in parallel; the merge is order-independent.

mod projection;

pub use projection::{from_prefix, project_monotone, project_weights, WeightRepair};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{self, ExponentPair, RatioReport};
use crate::error::{Error, Result};
use crate::model::{BoundedMonotoneSeq, Direction, SignedWeights, WeightedInstance};
use crate::sum;

/// Relative excess over the bound reported as a theorem violation.
pub const VIOLATION_RELATIVE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Holder,
    Cauchy,
    MultiHolder,
    Minkowski,
}

impl Problem {
    pub const ALL: [Problem; 4] = [
        Problem::Holder,
        Problem::Cauchy,
        Problem::MultiHolder,
        Problem::Minkowski,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Holder => "holder",
            Problem::Cauchy => "cauchy",
            Problem::MultiHolder => "multi-holder",
            Problem::Minkowski => "minkowski",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown problem `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub problem: Problem,
    pub n: usize,
    /// Box `[lo, hi]` applied to every sequence.
    pub lo: f64,
    pub hi: f64,
    pub p: f64,
    /// Number of sequences for the multi-sequence problem (uniform exponent
    /// weights `1/M`); ignored elsewhere.
    pub sequences: usize,
    pub restarts: usize,
    pub iterations: usize,
    /// Initial perturbation scale, relative to the box width.
    pub step: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            problem: Problem::Minkowski,
            n: 16,
            lo: 0.0,
            hi: 10.0,
            p: 2.0,
            sequences: 3,
            restarts: 32,
            iterations: 2000,
            step: 0.25,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.restarts == 0 || self.iterations == 0 {
            return bad("restarts and iterations must be at least 1".into());
        }
        if !(self.lo >= 0.0 && self.lo <= self.hi && self.hi.is_finite()) {
            return bad(format!(
                "box [{}, {}] is not a valid non-negative interval",
                self.lo, self.hi
            ));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return bad(format!("step must be positive, got {}", self.step));
        }
        match self.problem {
            Problem::Minkowski => {
                if !(self.p >= 1.0 && self.p.is_finite()) {
                    return bad(format!("minkowski needs p >= 1, got {}", self.p));
                }
                if self.hi == 0.0 {
                    return bad("box [0, 0] admits only zero sequences".into());
                }
            }
            Problem::Holder | Problem::Cauchy | Problem::MultiHolder => {
                if !(self.lo > 0.0) {
                    return bad(format!("{} needs a box with lo > 0", self.problem));
                }
                if self.problem == Problem::Holder && !(self.p > 1.0 && self.p.is_finite()) {
                    return bad(format!("holder needs p > 1, got {}", self.p));
                }
                if self.problem == Problem::MultiHolder && self.sequences == 0 {
                    return bad("multi-holder needs at least one sequence".into());
                }
            }
        }
        Ok(())
    }

    fn sequence_count(&self) -> usize {
        match self.problem {
            Problem::MultiHolder => self.sequences,
            _ => 2,
        }
    }

    fn exponent_weights(&self) -> Vec<f64> {
        let m = self.sequence_count();
        vec![1.0 / m as f64; m]
    }
}

/// Best value of one restart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub tightness: f64,
    pub ratio: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    pub weights: Vec<f64>,
    pub sequences: Vec<Vec<f64>>,
    pub exponent_weights: Vec<f64>,
    pub report: RatioReport,
    pub ratio: f64,
    pub bound: f64,
    pub tightness: f64,
    pub evaluations: u64,
    /// Candidates whose ratio exceeded the bound by more than
    /// [`VIOLATION_RELATIVE`]; any nonzero count falsifies a theorem.
    pub violations: u64,
    /// Largest `ratio / bound - 1` over all candidates.
    pub max_excess: f64,
    pub trace: Vec<RestartTrace>,
}

impl SearchResult {
    /// The best instance for two-sequence problems.
    pub fn instance(&self) -> Result<WeightedInstance> {
        if self.sequences.len() != 2 {
            return Err(Error::Parameter("not a two-sequence result".into()));
        }
        WeightedInstance::new(
            SignedWeights::exact(self.weights.clone())?,
            BoundedMonotoneSeq::tight(self.sequences[0].clone(), Direction::NonIncreasing)?,
            BoundedMonotoneSeq::tight(self.sequences[1].clone(), Direction::NonIncreasing)?,
        )
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    prefix: Vec<f64>,
    seqs: Vec<Vec<f64>>,
}

struct Scored {
    candidate: Candidate,
    weights: SignedWeights,
    report: RatioReport,
    score: f64,
}

struct Outcome {
    best: Option<Scored>,
    evaluations: u64,
    violations: u64,
    max_excess: f64,
}

/// Evaluates the target ratio on a feasible candidate.
fn evaluate(
    config: &SearchConfig,
    weights: &SignedWeights,
    seqs: &[Vec<f64>],
) -> Result<RatioReport> {
    let tight = |v: &Vec<f64>| BoundedMonotoneSeq::tight(v.clone(), Direction::NonIncreasing);
    match config.problem {
        Problem::MultiHolder => {
            let xs = seqs.iter().map(tight).collect::<Result<Vec<_>>>()?;
            engine::multi_holder_ratio(&xs, weights, &config.exponent_weights())
        }
        problem => {
            let inst = WeightedInstance::new(weights.clone(), tight(&seqs[0])?, tight(&seqs[1])?)?;
            match problem {
                Problem::Holder => engine::holder_ratio(&inst, ExponentPair::new(config.p)?),
                Problem::Cauchy => engine::cauchy_ratio(&inst),
                _ => engine::minkowski_ratio(&inst, config.p),
            }
        }
    }
}

/// Makes `a_k / b_k` monotone in `ratio_direction` while keeping both
/// sequences non-increasing and positive.
fn repair_cauchy(a: &mut [f64], b: &mut [f64], ratio_direction: Direction) -> Result<()> {
    let r: Vec<f64> = a.iter().zip(b.iter()).map(|(x, y)| x / y).collect();
    let (lo, hi) = crate::model::min_max(&r).ok_or(Error::Empty)?;
    let fitted = project_monotone(&r, ratio_direction, lo, hi)?;
    match ratio_direction {
        // non-increasing multiplier on a non-increasing base stays non-increasing
        Direction::NonIncreasing => {
            for (ak, (bk, rk)) in a.iter_mut().zip(b.iter().zip(fitted.values())) {
                *ak = bk * rk;
            }
        }
        Direction::NonDecreasing => {
            for (bk, (ak, rk)) in b.iter_mut().zip(a.iter().zip(fitted.values())) {
                *bk = ak / rk;
            }
        }
    }
    Ok(())
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

struct Restart<'a> {
    config: &'a SearchConfig,
    rng: ChaCha8Rng,
    ratio_direction: Direction,
    evaluations: u64,
    violations: u64,
    max_excess: f64,
}

impl<'a> Restart<'a> {
    fn new(config: &'a SearchConfig, restart: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let ratio_direction = if restart.is_multiple_of(2) {
            Direction::NonIncreasing
        } else {
            Direction::NonDecreasing
        };
        Restart {
            config,
            rng,
            ratio_direction,
            evaluations: 0,
            violations: 0,
            max_excess: f64::NEG_INFINITY,
        }
    }

    fn initial(&mut self) -> Candidate {
        let n = self.config.n;
        let alternating = self.rng.random_bool(0.25);
        let prefix = (0..n)
            .map(|k| {
                if alternating {
                    ((k + 1) % 2) as f64
                } else if self.rng.random_bool(0.3) {
                    0.0
                } else {
                    self.rng.random::<f64>()
                }
            })
            .collect();
        let (lo, hi) = (self.config.lo, self.config.hi);
        let seqs = (0..self.config.sequence_count())
            .map(|_| {
                let mut v: Vec<f64> = (0..n).map(|_| self.rng.random_range(lo..=hi)).collect();
                v.sort_by(|x, y| y.total_cmp(x));
                v
            })
            .collect();
        Candidate { prefix, seqs }
    }

    fn perturb(&mut self, current: &Candidate, step: f64) -> Candidate {
        let mut next = current.clone();
        let n = self.config.n;
        let width = self.config.hi - self.config.lo;
        let k = self.rng.random_range(0..n);
        let target = self.rng.random_range(0..=next.seqs.len());
        if target == next.seqs.len() {
            let top = next
                .prefix
                .iter()
                .fold(0.0f64, |m, &v| m.max(v))
                .max(f64::MIN_POSITIVE);
            match self.rng.random_range(0..4) {
                0 => next.prefix[k] = 0.0,
                1 => next.prefix[k] *= (step * 4.0 * gaussian(&mut self.rng)).exp(),
                2 => next.prefix[k] = top * self.rng.random::<f64>(),
                _ => next.prefix[k] += step * top * gaussian(&mut self.rng),
            }
            next.prefix[k] = next.prefix[k].max(0.0);
        } else {
            let seq = &mut next.seqs[target];
            let shift = step * width * gaussian(&mut self.rng);
            match self.rng.random_range(0..4) {
                0 => seq[k] += shift,
                // move a tail block, which keeps step shapes intact
                1 => seq[k..].iter_mut().for_each(|v| *v += shift),
                2 => seq[..=k].iter_mut().for_each(|v| *v += shift),
                _ => {
                    let extreme = if self.rng.random_bool(0.5) {
                        self.config.lo
                    } else {
                        self.config.hi
                    };
                    seq[k] = extreme;
                }
            }
        }
        next
    }

    /// Projects onto the feasible set and scores; `None` when infeasible.
    fn score(&mut self, mut candidate: Candidate) -> Option<Scored> {
        let config = self.config;
        for seq in candidate.seqs.iter_mut() {
            *seq = project_monotone(seq, Direction::NonIncreasing, config.lo, config.hi)
                .ok()?
                .values()
                .to_vec();
        }
        if config.problem == Problem::Cauchy {
            let (a, rest) = candidate.seqs.split_at_mut(1);
            repair_cauchy(&mut a[0], &mut rest[0], self.ratio_direction).ok()?;
        }
        let weights = from_prefix(&candidate.prefix).ok()?;
        candidate.prefix = weights.prefix_sums().to_vec();
        self.evaluations += 1;
        let report = evaluate(config, &weights, &candidate.seqs).ok()?;
        if report.degenerate {
            return None;
        }
        let excess = report.ratio / report.bound - 1.0;
        self.max_excess = self.max_excess.max(excess);
        if excess > VIOLATION_RELATIVE {
            self.violations += 1;
        }
        let score = report.tightness();
        Some(Scored {
            candidate,
            weights,
            report,
            score,
        })
    }

    fn run(mut self) -> Outcome {
        let config = self.config;
        let mut current = None;
        for _ in 0..8 {
            let init = self.initial();
            if let Some(s) = self.score(init) {
                current = Some(s);
                break;
            }
        }
        let Some(mut current) = current else {
            return self.finish(None);
        };
        let mut best_score = current.score;
        let mut best: Option<Scored> = None;
        let mut step = config.step;
        for _ in 0..config.iterations {
            let proposal = self.perturb(&current.candidate, step);
            match self.score(proposal) {
                Some(s) if s.score >= current.score => {
                    current = s;
                    step = (step * 1.1).min(1.0);
                    if current.score > best_score {
                        best_score = current.score;
                        best = None;
                    }
                }
                _ => step = (step * 0.98).max(1e-6),
            }
            if best.is_none() && current.score >= best_score {
                best = Some(Scored {
                    candidate: current.candidate.clone(),
                    weights: current.weights.clone(),
                    report: current.report.clone(),
                    score: current.score,
                });
            }
        }
        let best = best.or(Some(current));
        self.finish(best)
    }

    fn finish(self, best: Option<Scored>) -> Outcome {
        Outcome {
            best,
            evaluations: self.evaluations,
            violations: self.violations,
            max_excess: self.max_excess,
        }
    }
}

/// Maximizes `ratio / bound` over admissible weights and non-increasing
/// sequences in the box. Deterministic for a fixed config; independent of the
/// size of the rayon pool it runs on.
pub fn search_max_ratio(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let outcomes: Vec<Outcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| Restart::new(config, r).run())
        .collect();

    let mut trace = Vec::with_capacity(outcomes.len());
    let mut evaluations = 0;
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut winner: Option<&Scored> = None;
    for (restart, outcome) in outcomes.iter().enumerate() {
        evaluations += outcome.evaluations;
        violations += outcome.violations;
        max_excess = max_excess.max(outcome.max_excess);
        if let Some(s) = &outcome.best {
            trace.push(RestartTrace {
                restart,
                tightness: s.score,
                ratio: s.report.ratio,
                bound: s.report.bound,
            });
            if winner.is_none_or(|w| s.score > w.score) {
                winner = Some(s);
            }
        }
    }
    let best = winner.ok_or_else(|| {
        Error::Config("no restart produced a feasible non-degenerate candidate".into())
    })?;
    Ok(SearchResult {
        config: config.clone(),
        weights: best.weights.values().to_vec(),
        sequences: best.candidate.seqs.clone(),
        exponent_weights: match config.problem {
            Problem::MultiHolder => config.exponent_weights(),
            _ => Vec::new(),
        },
        report: best.report.clone(),
        ratio: best.report.ratio,
        bound: best.report.bound,
        tightness: best.score,
        evaluations,
        violations,
        max_excess,
        trace,
    })
}

/// Sum of a restart trace, handy for quick regressions.
pub fn trace_mean(trace: &[RestartTrace]) -> f64 {
    if trace.is_empty() {
        return 0.0;
    }
    sum::sum(trace.iter().map(|t| t.tightness)) / trace.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(problem: Problem) -> SearchConfig {
        SearchConfig {
            problem,
            n: 8,
            lo: 0.5,
            hi: 4.0,
            restarts: 4,
            iterations: 200,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn infeasible_boxes_are_config_errors() {
        let c = SearchConfig {
            lo: 0.0,
            ..quick(Problem::Holder)
        };
        assert!(matches!(search_max_ratio(&c), Err(Error::Config(_))));
        let c = SearchConfig {
            restarts: 0,
            ..quick(Problem::Minkowski)
        };
        assert!(matches!(search_max_ratio(&c), Err(Error::Config(_))));
    }

    #[test]
    fn single_term_holder_is_not_tight() {
        let c = SearchConfig {
            n: 1,
            ..quick(Problem::Holder)
        };
        let r = search_max_ratio(&c).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12);
        assert!(r.bound > 1.0 && r.tightness < 1.0);
    }

    #[test]
    fn forced_equal_sequences_give_unit_cauchy() {
        let c = SearchConfig {
            lo: 2.0,
            hi: 2.0,
            ..quick(Problem::Cauchy)
        };
        let r = search_max_ratio(&c).unwrap();
        assert_eq!((r.ratio, r.bound), (1.0, 1.0));
    }

    #[test]
    fn results_are_feasible_and_sound() {
        for problem in Problem::ALL {
            let r = search_max_ratio(&quick(problem)).unwrap();
            assert_eq!(r.violations, 0, "{problem}");
            assert!(r.tightness <= 1.0 + VIOLATION_RELATIVE);
            assert!(crate::model::validate_weights(&r.weights, 0.0)
                .unwrap()
                .is_admissible());
            for s in &r.sequences {
                assert!(s.windows(2).all(|w| w[0] >= w[1]));
            }
            assert_eq!(r.trace.len(), 4);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let c = quick(Problem::Minkowski);
        assert_eq!(search_max_ratio(&c).unwrap(), search_max_ratio(&c).unwrap());
        let other = SearchConfig {
            seed: 7,
            ..c.clone()
        };
        assert_ne!(
            search_max_ratio(&c).unwrap().trace,
            search_max_ratio(&other).unwrap().trace
        );
    }
}
