//! `integral`: the integral forms on a problem file or built-in demo, at
//! several grid resolutions, with the discretized engine as a cross-check.

use std::path::Path;

use ineq_forge::engine::{self, ExponentPair};
use ineq_forge::integral::{self, Builtin, ProblemSpec, QuadratureProblem};
use ineq_forge::Error;
use serde_json::{json, Value};

use crate::args::{Format, Global, IntegralArgs, IntegralTheorem};
use crate::commands::verify::{judge, Verdict};
use crate::commands::{parse_json, read, to_json, Files};
use crate::exit::{Failure, Outcome};
use crate::output::{num, Table};
use crate::Emitted;

/// Cell count used for built-in demos.
pub const BUILTIN_CELLS: usize = 10_000;

impl IntegralTheorem {
    pub fn name(self) -> &'static str {
        match self {
            IntegralTheorem::Holder => "holder",
            IntegralTheorem::Minkowski => "minkowski",
            IntegralTheorem::Chebyshev => "chebyshev",
        }
    }
}

/// One evaluated resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub cells: usize,
    pub verdict: Verdict,
    /// `|v_N − v_prev| / |v_N|` against the previous level.
    pub drift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    pub levels: Vec<Level>,
    /// The discrete engine on the finest level's cells.
    pub discrete: Verdict,
    pub discretization_tolerance: f64,
}

/// A problem file's path and raw bytes, kept for the manifest digest.
type Input = (std::path::PathBuf, Vec<u8>);

fn resolve(name: &str) -> Result<(ProblemSpec, Option<Input>), Failure> {
    if let Some(b) = Builtin::parse(name) {
        return Ok((b.spec(BUILTIN_CELLS), None));
    }
    let path = Path::new(name);
    if !path.exists() {
        let names: Vec<&str> = Builtin::ALL.iter().map(|b| b.as_str()).collect();
        return Err(Failure::malformed(format!(
            "`{name}` is neither a file nor a built-in problem ({})",
            names.join(", ")
        )));
    }
    let bytes = read(path)?;
    let spec = parse_json(&bytes, "problem file")?;
    Ok((spec, Some((path.to_path_buf(), bytes))))
}

/// Default levels: `N/100`, `N/10`, `N`, skipping any below one cell.
pub fn default_levels(cells: usize) -> Vec<usize> {
    let mut out: Vec<usize> = [cells / 100, cells / 10, cells]
        .into_iter()
        .filter(|&n| n >= 1)
        .collect();
    out.dedup();
    out
}

/// Names the node when `P` goes negative.
fn at_node(problem: &QuadratureProblem, err: Error) -> Failure {
    match err {
        Error::Inadmissible { index, prefix } => Failure::precondition(format!(
            "inadmissible density: P(x_{index}) = {prefix:e} < 0 at node x_{index} = {}",
            problem.nodes()[index]
        )),
        other => other.into(),
    }
}

fn value(v: &Verdict) -> f64 {
    match v {
        Verdict::Ratio(r) => r.ratio,
        Verdict::Slack(g) => g.value,
    }
}

fn evaluate(
    problem: &QuadratureProblem,
    theorem: IntegralTheorem,
    p: f64,
    big_b: Option<f64>,
) -> Result<Verdict, Error> {
    let big_b = big_b.unwrap_or_else(|| {
        problem
            .g_cells()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    });
    Ok(match theorem {
        IntegralTheorem::Holder => Verdict::Ratio(integral::integral_holder_ratio(
            problem,
            ExponentPair::new(p)?,
        )?),
        IntegralTheorem::Minkowski => {
            Verdict::Ratio(integral::integral_minkowski_ratio(problem, p)?)
        }
        IntegralTheorem::Chebyshev => {
            Verdict::Slack(integral::integral_chebyshev_slack(problem, big_b)?)
        }
    })
}

fn evaluate_discrete(
    problem: &QuadratureProblem,
    theorem: IntegralTheorem,
    p: f64,
    big_b: Option<f64>,
) -> Result<Verdict, Error> {
    let inst = integral::discretize(problem)?;
    Ok(match theorem {
        IntegralTheorem::Holder => {
            Verdict::Ratio(engine::holder_ratio(&inst, ExponentPair::new(p)?)?)
        }
        IntegralTheorem::Minkowski => Verdict::Ratio(engine::minkowski_ratio(&inst, p)?),
        IntegralTheorem::Chebyshev => Verdict::Slack(engine::chebyshev_slack(
            &inst,
            big_b.unwrap_or_else(|| inst.b().hi()),
        )?),
    })
}

/// Evaluates `spec` at each level (ascending) and cross-checks the finest.
pub fn refine(
    spec: &ProblemSpec,
    levels: &[usize],
    theorem: IntegralTheorem,
    p: f64,
    big_b: Option<f64>,
) -> Result<Refinement, Failure> {
    if levels.is_empty() {
        return Err(Failure::precondition("no refinement levels"));
    }
    let mut out: Vec<Level> = Vec::with_capacity(levels.len());
    let mut finest = None;
    for &cells in levels {
        let problem = spec.with_cells(cells).build()?;
        let verdict = evaluate(&problem, theorem, p, big_b).map_err(|e| at_node(&problem, e))?;
        let drift = out.last().map(|prev| {
            let (now, before) = (value(&verdict), value(&prev.verdict));
            (now - before).abs() / now.abs()
        });
        out.push(Level {
            cells,
            verdict,
            drift,
        });
        finest = Some(problem);
    }
    let finest = finest.expect("levels are non-empty");
    let discrete =
        evaluate_discrete(&finest, theorem, p, big_b).map_err(|e| at_node(&finest, e))?;
    Ok(Refinement {
        levels: out,
        discrete,
        discretization_tolerance: finest.discretization_tolerance(),
    })
}

/// The refinement table, plus a final `discrete` row.
pub fn table(r: &Refinement) -> Table {
    let ratio = matches!(r.discrete, Verdict::Ratio(_));
    let mut t = if ratio {
        Table::new(&[
            "kind",
            "N",
            "ratio",
            "bound",
            "slack",
            "degenerate",
            "drift",
        ])
    } else {
        Table::new(&["kind", "N", "slack", "scale", "drift"])
    };
    let drift = |d: Option<f64>| d.map(num).unwrap_or_else(|| "nan".into());
    let mut row = |kind: &str, cells: usize, v: &Verdict, d: Option<f64>| {
        let mut cols = vec![kind.to_string(), cells.to_string()];
        match v {
            Verdict::Ratio(x) => cols.extend([
                num(x.ratio),
                num(x.bound),
                num(x.slack),
                x.degenerate.to_string(),
            ]),
            Verdict::Slack(g) => cols.extend([num(g.value), num(g.scale)]),
        }
        cols.push(drift(d));
        t.push(cols);
    };
    for level in &r.levels {
        row("integral", level.cells, &level.verdict, level.drift);
    }
    let last = r.levels.last().expect("levels are non-empty");
    let gap = (value(&r.discrete) - value(&last.verdict)).abs() / value(&last.verdict).abs();
    row("discrete", last.cells, &r.discrete, Some(gap));
    t
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Ratio(r) => serde_json::to_value(r).expect("report serializes"),
        Verdict::Slack(g) => json!({"slack": g.value, "scale": g.scale}),
    }
}

pub fn run(global: &Global, args: &IntegralArgs) -> Result<Emitted, Failure> {
    let (spec, input) = resolve(&args.problem)?;
    let levels = args
        .levels
        .clone()
        .unwrap_or_else(|| default_levels(spec.cells));
    let refinement = refine(&spec, &levels, args.theorem, args.p, args.big_b)?;
    let csv = table(&refinement).render();

    let finest = refinement.levels.last().expect("levels are non-empty");
    let mut outcome = Outcome::Ok;
    let mut stderr = String::new();
    for level in &refinement.levels {
        let (o, note) = judge(&level.verdict, global.tol);
        if o != Outcome::Ok && (outcome == Outcome::Ok || o == Outcome::BoundViolation) {
            outcome = o;
        }
        if let Some(n) = note {
            stderr.push_str(&format!("error: N = {}: {n}\n", level.cells));
        }
    }

    let result = json!({
        "problem": args.problem,
        "theorem": args.theorem.name(),
        "p": args.p,
        "report": verdict_json(&finest.verdict),
        "levels": refinement.levels.iter().map(|l| json!({
            "N": l.cells,
            "report": verdict_json(&l.verdict),
            "drift": l.drift,
        })).collect::<Vec<_>>(),
        "discrete": verdict_json(&refinement.discrete),
        "discretization_tolerance": refinement.discretization_tolerance,
    });

    let stem = format!(
        "integral-{}-{}",
        Builtin::parse(&args.problem)
            .map(|b| b.as_str())
            .unwrap_or("file"),
        args.theorem.name()
    );
    let mut files = Files::new(
        "integral",
        json!({"problem": spec, "levels": levels, "theorem": args.theorem.name(), "p": args.p, "big_b": args.big_b}),
        global,
    );
    if let Some((path, bytes)) = &input {
        files.input(path, bytes);
    }
    files.add(format!("{stem}.json"), to_json(&result));
    files.add_plotted(&stem, csv.clone())?;
    files.write(global)?;

    Ok(Emitted {
        stdout: match global.format {
            Format::Json => to_json(&result),
            Format::Csv => csv,
        },
        stderr,
        outcome: Some(outcome),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_levels_skip_empty_grids() {
        assert_eq!(default_levels(10_000), vec![100, 1000, 10_000]);
        assert_eq!(default_levels(50), vec![5, 50]);
        assert_eq!(default_levels(1), vec![1]);
    }

    #[test]
    fn refinement_table_ends_with_the_discrete_row() {
        let r = refine(
            &Builtin::Const.spec(100),
            &[10, 100],
            IntegralTheorem::Minkowski,
            2.0,
            None,
        )
        .unwrap();
        let t = table(&r);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[2][0], "discrete");
        assert_eq!(t.rows[0].last().unwrap(), "nan");
    }
}
