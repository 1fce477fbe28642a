//! The `ineq-forge` command-line front-end.
//!
//! Every run ends with one of the exit codes in [`exit::Outcome`]: 0 on
//! success, 2 for bad input or a failed precondition, 3 when a computed
//! ratio exceeds its bound, 4 for malformed files or arguments.

pub mod args;
pub mod commands;
pub mod exit;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command, Format, Global};
pub use exit::{Failure, Outcome};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "INEQ_FORGE_THREADS";

/// What a command produced: text for stdout and an optional stderr note.
#[derive(Debug, Default)]
pub struct Emitted {
    pub stdout: String,
    pub stderr: String,
    pub outcome: Option<Outcome>,
}

/// Parses `argv`, runs the command and returns the exit code. Output goes to
/// the given writers so the binary and tests share one path.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                Outcome::Malformed
            } else {
                Outcome::Ok
            };
            let text = e.render().to_string();
            if code == Outcome::Ok {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code.code();
        }
    };
    if let Err(f) = configure_threads() {
        let _ = writeln!(err, "error: {f}");
        return f.outcome.code();
    }
    match run(&cli) {
        Ok(emitted) => {
            let _ = out.write_all(emitted.stdout.as_bytes());
            let _ = err.write_all(emitted.stderr.as_bytes());
            emitted.outcome.unwrap_or(Outcome::Ok).code()
        }
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.outcome.code()
        }
    }
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Emitted, Failure> {
    match &cli.command {
        Command::Verify(a) => commands::verify::run(&cli.global, a),
        Command::Family(a) => commands::family::run(&cli.global, a),
        Command::Search(a) => commands::search::run(&cli.global, a),
        Command::Integral(a) => commands::integral::run(&cli.global, a),
        Command::Plot(a) => commands::plot::run(&cli.global, a),
    }
}

/// Sizes the global rayon pool from [`THREADS_ENV`]. Results never depend
/// on the pool size; only wall time does.
fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::precondition(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a second call in the same process (tests) keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}
