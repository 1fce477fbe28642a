//! `family`: sweep an explicit construction over a parameter grid.

use ineq_forge::families::{self, FamilyId, SweepConfig, SweepRow};
use serde_json::json;

use crate::args::{FamilyArgs, Format, Global};
use crate::commands::{to_json, Files};
use crate::exit::{Failure, Outcome};
use crate::output::{num, short, Table};
use crate::Emitted;

/// Default `(from, to)` for each family.
fn default_range(family: FamilyId) -> (f64, f64) {
    match family {
        FamilyId::HolderCollapse => (2.0, 1000.0),
        FamilyId::HolderBlowup | FamilyId::MinkowskiCollapse => (1e-1, 1e-6),
        FamilyId::MinkowskiSharp => (1.0, 1e4),
    }
}

fn integer_valued(family: FamilyId) -> bool {
    matches!(family, FamilyId::HolderCollapse | FamilyId::MinkowskiSharp)
}

/// The grid described by the flags.
pub fn grid(args: &FamilyArgs) -> Result<Vec<f64>, Failure> {
    let family = FamilyId::from(args.family);
    if let Some(values) = &args.values {
        return Ok(values.clone());
    }
    let (d_from, d_to) = default_range(family);
    let (from, to) = (args.from.unwrap_or(d_from), args.to.unwrap_or(d_to));
    if integer_valued(family) {
        let bad = |v: f64| !(v.is_finite() && v >= 1.0 && v.fract() == 0.0);
        if bad(from) || bad(to) {
            return Err(Failure::precondition(format!(
                "{} takes integer grid endpoints >= 1, got {from} and {to}",
                family.as_str()
            )));
        }
        let even = family == FamilyId::HolderCollapse;
        let ints =
            families::integer_grid(from as usize, to as usize, args.points_per_decade, even)?;
        Ok(ints.into_iter().map(|k| k as f64).collect())
    } else {
        Ok(families::geometric_grid(from, to, args.points_per_decade)?)
    }
}

pub fn config(args: &FamilyArgs) -> Result<SweepConfig, Failure> {
    Ok(SweepConfig {
        family: args.family.into(),
        p: args.p,
        grid: grid(args)?,
        b_tail: args.b_tail,
        n: args.n,
    })
}

/// The sweep table: one row per grid point, columns in a fixed order.
pub fn table(family: FamilyId, rows: &[SweepRow]) -> Table {
    let mut t = Table::new(&[
        "family",
        family.parameter(),
        "p",
        "predicted",
        "computed",
        "bound",
        "slack",
    ]);
    for r in rows {
        t.push(vec![
            r.family.as_str().into(),
            num(r.parameter),
            num(r.p),
            num(r.predicted),
            num(r.computed),
            num(r.bound),
            num(r.slack),
        ]);
    }
    t
}

pub fn run(global: &Global, args: &FamilyArgs) -> Result<Emitted, Failure> {
    let config = config(args)?;
    let rows = families::sweep(&config)?;
    let family = config.family;
    let csv = table(family, &rows).render();

    let mut files = Files::new(
        "family",
        json!({
            "family": family.as_str(),
            "p": config.p,
            "grid": config.grid,
            "points_per_decade": args.points_per_decade,
            "b_tail": config.b_tail,
            "n": config.n,
        }),
        global,
    );
    files.add_plotted(family.as_str(), csv.clone())?;
    files.write(global)?;

    let mut stderr = String::new();
    let mut outcome = Outcome::Ok;
    for r in &rows {
        if r.computed > r.bound + global.tol {
            outcome = Outcome::BoundViolation;
            stderr.push_str(&format!(
                "error: bound violated at {} = {}: ratio {} > bound {}\n",
                family.parameter(),
                r.parameter,
                short(r.computed),
                short(r.bound)
            ));
        }
    }
    let last = rows.last().expect("sweep grids are non-empty");
    stderr.push_str(&format!(
        "{}: {} points, last {} = {}: computed {} predicted {} bound {}\n",
        family.as_str(),
        rows.len(),
        family.parameter(),
        short(last.parameter),
        short(last.computed),
        short(last.predicted),
        short(last.bound)
    ));
    Ok(Emitted {
        stdout: match global.format {
            Format::Csv => csv,
            Format::Json => to_json(&rows),
        },
        stderr,
        outcome: Some(outcome),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::FamilyArg;

    fn args(family: FamilyArg) -> FamilyArgs {
        FamilyArgs {
            family,
            p: 2.0,
            from: None,
            to: None,
            points_per_decade: 8,
            values: None,
            b_tail: 1e-12,
            n: 4,
        }
    }

    #[test]
    fn default_grids() {
        let g = grid(&args(FamilyArg::MinkowskiSharp)).unwrap();
        assert_eq!((g[0], *g.last().unwrap()), (1.0, 1e4));
        assert!(g.iter().all(|v| v.fract() == 0.0));
        let g = grid(&args(FamilyArg::HolderCollapse)).unwrap();
        assert!(g.iter().all(|&v| (v as usize).is_multiple_of(2)));
        let g = grid(&args(FamilyArg::HolderBlowup)).unwrap();
        assert_eq!((g[0], *g.last().unwrap()), (1e-1, 1e-6));
        assert_eq!(g.len(), 41);
    }

    #[test]
    fn integer_families_reject_fractional_endpoints() {
        let mut a = args(FamilyArg::MinkowskiSharp);
        a.from = Some(1.5);
        assert!(grid(&a).is_err());
    }

    #[test]
    fn explicit_values_win() {
        let mut a = args(FamilyArg::MinkowskiCollapse);
        a.values = Some(vec![0.5, 0.25]);
        a.from = Some(1e-3);
        assert_eq!(grid(&a).unwrap(), vec![0.5, 0.25]);
    }
}
