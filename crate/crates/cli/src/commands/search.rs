//! `search`: constrained hill climbing toward each bound.

use ineq_forge::search::{self, Problem, SearchConfig, SearchResult};
use serde_json::json;

use crate::args::{Format, Global, SearchArgs};
use crate::commands::{to_json, Files};
use crate::exit::{Failure, Outcome};
use crate::output::{num, short, Table};
use crate::Emitted;

pub fn config(global: &Global, args: &SearchArgs, problem: Problem) -> SearchConfig {
    let lo = args.lo.unwrap_or(match problem {
        Problem::Minkowski => 0.0,
        _ => 0.1,
    });
    SearchConfig {
        problem,
        n: args.n,
        lo,
        hi: args.hi,
        p: args.p,
        sequences: args.sequences,
        restarts: args.restarts,
        iterations: args.iterations,
        step: args.step,
        seed: global.seed,
    }
}

/// Per-restart best values.
pub fn trace_table(result: &SearchResult) -> Table {
    let mut t = Table::new(&["restart", "tightness", "ratio", "bound"]);
    for r in &result.trace {
        t.push(vec![
            r.restart.to_string(),
            num(r.tightness),
            num(r.ratio),
            num(r.bound),
        ]);
    }
    t
}

fn summary_table(results: &[SearchResult]) -> Table {
    let mut t = Table::new(&[
        "problem",
        "n",
        "p",
        "ratio",
        "bound",
        "tightness",
        "evaluations",
        "violations",
    ]);
    for r in results {
        t.push(vec![
            r.config.problem.as_str().into(),
            r.config.n.to_string(),
            num(r.config.p),
            num(r.ratio),
            num(r.bound),
            num(r.tightness),
            r.evaluations.to_string(),
            r.violations.to_string(),
        ]);
    }
    t
}

pub fn run(global: &Global, args: &SearchArgs) -> Result<Emitted, Failure> {
    let configs: Vec<SearchConfig> = args
        .problem
        .problems()
        .into_iter()
        .map(|p| config(global, args, p))
        .collect();
    for c in &configs {
        c.validate()?;
    }
    let results = configs
        .iter()
        .map(search::search_max_ratio)
        .collect::<ineq_forge::Result<Vec<_>>>()?;

    let mut files = Files::new("search", json!({ "runs": configs }), global);
    let mut stderr = String::new();
    let mut outcome = Outcome::Ok;
    for r in &results {
        let name = r.config.problem.as_str();
        files.add(format!("search-{name}.json"), to_json(r));
        files.add_plotted(&format!("search-{name}-trace"), trace_table(r).render())?;
        stderr.push_str(&format!(
            "{name}: tightness {} (ratio {}, bound {}) over {} restarts, {} evaluations, {} violations\n",
            short(r.tightness),
            short(r.ratio),
            short(r.bound),
            r.config.restarts,
            r.evaluations,
            r.violations
        ));
        if r.violations > 0 {
            outcome = Outcome::BoundViolation;
            stderr.push_str(&format!(
                "error: {name}: {} candidates exceeded the bound, worst by {:e}\n",
                r.violations, r.max_excess
            ));
        }
    }
    files.write(global)?;

    let stdout = match (global.format, results.as_slice()) {
        (Format::Csv, _) => summary_table(&results).render(),
        (Format::Json, [single]) => to_json(single),
        (Format::Json, all) => to_json(&all),
    };
    Ok(Emitted {
        stdout,
        stderr,
        outcome: Some(outcome),
    })
}
