//! Crate-wide error type.

use std::fmt;

use thiserror::Error;

/// A single validation failure, addressed by a dotted path into the offending
/// structure (e.g. `components[1].beta`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of an operation.
    #[error("domain error in {context}: {message}")]
    Domain {
        context: &'static str,
        message: String,
    },

    /// Structured input failed validation; every violation is reported.
    #[error("validation failed:{}", format_violations(.0))]
    Validation(Vec<Violation>),

    /// The data cannot pin down the parameters being estimated.
    #[error("unidentifiable estimation problem: {0}")]
    Unidentifiable(String),

    /// An iterative solver ran out of iterations.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// The requested quantity has no closed form under these settings.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// An optimization found no admissible optimum.
    #[error("no optimum: {0}")]
    NoOptimum(String),

    /// Malformed serialized input (CSV, config fragments, ...).
    #[error("malformed {what}: {message}")]
    Parse { what: &'static str, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            context,
            message: message.into(),
        }
    }

    pub fn parse(what: &'static str, message: impl Into<String>) -> Self {
        Error::Parse {
            what,
            message: message.into(),
        }
    }
}

fn format_violations(violations: &[Violation]) -> String {
    let mut out = String::new();
    for v in violations {
        out.push_str("\n  - ");
        out.push_str(&v.to_string());
    }
    out
}

pub type Result<T> = std::result::Result<T, Error>;
