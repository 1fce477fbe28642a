//! `verify`: one instance file against one theorem.

use ineq_forge::engine::{self, ExponentPair, Gap, RatioReport};
use ineq_forge::schema::InstanceFile;
use serde::Serialize;
use serde_json::json;

use crate::args::{Format, Global, Theorem, VerifyArgs};
use crate::commands::{parse_json, read, to_json, Files};
use crate::exit::{Failure, Outcome};
use crate::output::{num, short, Table};
use crate::Emitted;

/// What a theorem evaluates to: a ratio against a bound, or a slack that
/// should be non-negative.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Ratio(RatioReport),
    Slack(Gap),
}

#[derive(Serialize)]
struct SlackJson {
    slack: f64,
    scale: f64,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Holder => "holder",
            Theorem::Cauchy => "cauchy",
            Theorem::MultiHolder => "multi-holder",
            Theorem::Minkowski => "minkowski",
            Theorem::Chebyshev => "chebyshev",
            Theorem::Superadditivity => "superadditivity",
            Theorem::JensenSteffensen => "jensen-steffensen",
        }
    }
}

/// Evaluates `theorem` on a parsed instance file.
pub fn evaluate(
    file: &InstanceFile,
    theorem: Theorem,
    p: f64,
    big_b: Option<f64>,
) -> Result<Verdict, Failure> {
    if theorem == Theorem::MultiHolder {
        let (seqs, w) = file.multi()?;
        let weights = file.signed_weights()?;
        return Ok(Verdict::Ratio(engine::multi_holder_ratio(
            &seqs, &weights, &w,
        )?));
    }
    let inst = file.instance()?;
    Ok(match theorem {
        Theorem::Holder => Verdict::Ratio(engine::holder_ratio(&inst, ExponentPair::new(p)?)?),
        Theorem::Cauchy => Verdict::Ratio(engine::cauchy_ratio(&inst)?),
        Theorem::Minkowski => Verdict::Ratio(engine::minkowski_ratio(&inst, p)?),
        Theorem::Chebyshev => {
            let big_b = big_b.unwrap_or_else(|| inst.b().hi());
            Verdict::Slack(engine::chebyshev_slack(&inst, big_b)?)
        }
        Theorem::Superadditivity => Verdict::Slack(engine::superadditivity_slack(&inst, p)?),
        Theorem::JensenSteffensen => Verdict::Slack(engine::jensen_steffensen_check(
            inst.a(),
            inst.weights(),
            p,
        )?),
        Theorem::MultiHolder => unreachable!("handled above"),
    })
}

/// Exit outcome for a verdict under absolute tolerance `tol`. Slacks are
/// allowed to dip below zero by `tol` times their term magnitude.
pub fn judge(verdict: &Verdict, tol: f64) -> (Outcome, Option<String>) {
    match verdict {
        Verdict::Ratio(r) if r.degenerate => (
            Outcome::Precondition,
            Some(format!(
                "denominator vanishes ({:e}); the ratio is undefined",
                r.denominator
            )),
        ),
        Verdict::Ratio(r) if !r.within_bound(tol) => (
            Outcome::BoundViolation,
            Some(format!(
                "bound violated: ratio {} > bound {}",
                short(r.ratio),
                short(r.bound)
            )),
        ),
        Verdict::Slack(g) if g.value < -tol * g.scale.max(1.0) => (
            Outcome::BoundViolation,
            Some(format!(
                "negative slack {:e} (scale {:e})",
                g.value, g.scale
            )),
        ),
        _ => (Outcome::Ok, None),
    }
}

fn render(verdict: &Verdict, theorem: Theorem, format: Format) -> String {
    match (verdict, format) {
        (Verdict::Ratio(r), Format::Json) => to_json(r),
        (Verdict::Slack(g), Format::Json) => to_json(&SlackJson {
            slack: g.value,
            scale: g.scale,
        }),
        (Verdict::Ratio(r), Format::Csv) => {
            let mut t = Table::new(&[
                "theorem",
                "numerator",
                "denominator",
                "ratio",
                "bound",
                "slack",
                "degenerate",
            ]);
            t.push(vec![
                theorem.name().into(),
                num(r.numerator),
                num(r.denominator),
                num(r.ratio),
                num(r.bound),
                num(r.slack),
                r.degenerate.to_string(),
            ]);
            t.render()
        }
        (Verdict::Slack(g), Format::Csv) => {
            let mut t = Table::new(&["theorem", "slack", "scale"]);
            t.push(vec![theorem.name().into(), num(g.value), num(g.scale)]);
            t.render()
        }
    }
}

pub fn run(global: &Global, args: &VerifyArgs) -> Result<Emitted, Failure> {
    let bytes = read(&args.file)?;
    let file: InstanceFile = parse_json(&bytes, "instance file")?;
    let verdict = evaluate(&file, args.theorem, args.p, args.big_b)?;
    let (outcome, note) = judge(&verdict, global.tol);

    let mut files = Files::new(
        "verify",
        json!({"file": args.file.display().to_string(), "theorem": args.theorem.name(), "p": args.p, "big_b": args.big_b}),
        global,
    );
    files.input(&args.file, &bytes);
    files.add("verify.json", render(&verdict, args.theorem, Format::Json));
    files.add("verify.csv", render(&verdict, args.theorem, Format::Csv));
    files.write(global)?;

    Ok(Emitted {
        stdout: render(&verdict, args.theorem, global.format),
        stderr: note.map(|n| format!("error: {n}\n")).unwrap_or_default(),
        outcome: Some(outcome),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(ratio: f64, bound: f64, degenerate: bool) -> Verdict {
        Verdict::Ratio(RatioReport {
            numerator: ratio,
            denominator: 1.0,
            ratio,
            bound,
            slack: bound - ratio,
            degenerate,
        })
    }

    #[test]
    fn judgement_follows_the_exit_contract() {
        assert_eq!(judge(&report(1.0, 1.0, false), 1e-9).0, Outcome::Ok);
        assert_eq!(judge(&report(1.0 + 1e-10, 1.0, false), 1e-9).0, Outcome::Ok);
        assert_eq!(
            judge(&report(1.1, 1.0, false), 1e-9).0,
            Outcome::BoundViolation
        );
        assert_eq!(
            judge(&report(0.0, 1.0, true), 1e-9).0,
            Outcome::Precondition
        );
        let slack = |value, scale| Verdict::Slack(Gap { value, scale });
        assert_eq!(judge(&slack(-1e-12, 10.0), 1e-9).0, Outcome::Ok);
        assert_eq!(judge(&slack(-1e-3, 10.0), 1e-9).0, Outcome::BoundViolation);
    }

    #[test]
    fn cauchy_on_equal_sequences() {
        let file: InstanceFile =
            serde_json::from_str(r#"{"weights": [2, -1], "a": [3, 1], "b": [3, 1]}"#).unwrap();
        match evaluate(&file, Theorem::Cauchy, 2.0, None).unwrap() {
            Verdict::Ratio(r) => assert_eq!(r.ratio, 1.0),
            other => panic!("{other:?}"),
        }
    }
}
