use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An iterative method exhausted its budget.
    NonConvergence {
        method: &'static str,
        iterations: usize,
    },
    /// The graph is not connected: `λ₂` is below the connectivity threshold.
    Disconnected { lambda2: f64 },
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// Input for which the requested quantity is undefined (e.g. the zero polynomial).
    DegenerateInput(&'static str),
    InvalidGraph(String),
    InvalidConfig(&'static str),
    InvalidOptions(&'static str),
    EmptyTrajectory,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonConvergence { method, iterations } => {
                write!(f, "{method} did not converge within {iterations} iterations")
            }
            Error::Disconnected { lambda2 } => {
                write!(f, "graph is disconnected (lambda_2 = {lambda2:e})")
            }
            Error::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(f, "dimension mismatch for {what}: expected {expected}, found {found}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::InvalidGraph(msg) => write!(f, "invalid graph: {msg}"),
            Error::InvalidConfig(msg) => write!(f, "invalid system configuration: {msg}"),
            Error::InvalidOptions(msg) => write!(f, "invalid options: {msg}"),
            Error::EmptyTrajectory => f.write_str("trajectory is empty"),
        }
    }
}

impl core::error::Error for Error {}
