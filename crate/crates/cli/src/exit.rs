use std::fmt;

use ineq_forge::Error;

/// The exit-code contract: every run ends in one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok = 0,
    Precondition = 2,
    BoundViolation = 3,
    Malformed = 4,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A failed run: the exit code plus the message printed to stderr.
#[derive(Debug)]
pub struct Failure {
    pub outcome: Outcome,
    pub message: String,
}

impl Failure {
    pub fn precondition(message: impl Into<String>) -> Self {
        Failure {
            outcome: Outcome::Precondition,
            message: message.into(),
        }
    }

    pub fn malformed(message: impl Into<String>) -> Self {
        Failure {
            outcome: Outcome::Malformed,
            message: message.into(),
        }
    }

    pub fn violation(message: impl Into<String>) -> Self {
        Failure {
            outcome: Outcome::BoundViolation,
            message: message.into(),
        }
    }

    pub fn read(path: &std::path::Path, err: std::io::Error) -> Self {
        Failure::malformed(format!("cannot read {}: {err}", path.display()))
    }

    pub fn write(path: &std::path::Path, err: std::io::Error) -> Self {
        Failure::precondition(format!("cannot write {}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            // an inner sum went negative although the weights were accepted
            Error::Invariant(_) => Failure::violation(err.to_string()),
            _ => Failure::precondition(err.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(err: serde_json::Error) -> Self {
        Failure::malformed(format!("malformed JSON: {err}"))
    }
}
