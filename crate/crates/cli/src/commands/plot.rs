//! `plot`: rebuild an SVG from its CSV.

use std::fs;

use crate::args::{Global, PlotArgs};
use crate::commands::read;
use crate::exit::Failure;
use crate::Emitted;

pub fn run(_global: &Global, args: &PlotArgs) -> Result<Emitted, Failure> {
    let bytes = read(&args.csv)?;
    let csv = String::from_utf8(bytes).map_err(|_| Failure::malformed("CSV is not UTF-8"))?;
    let title = args
        .csv
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Failure::malformed("CSV path has no file name"))?;
    let svg = crate::svg::render(&csv, title)?;
    let target = args
        .output
        .clone()
        .unwrap_or_else(|| args.csv.with_extension("svg"));
    fs::write(&target, svg).map_err(|e| Failure::write(&target, e))?;
    Ok(Emitted {
        stdout: String::new(),
        stderr: format!("wrote {}\n", target.display()),
        outcome: None,
    })
}
