//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Input outside the documented domain (bad half-side length, tolerance,
    /// grid size, ...).
    Parameter(String),
    /// An iterative solve failed: Newton divergence after all restarts, a
    /// bisection bracket without a sign change, or a result that violates a
    /// post-condition.
    Solver {
        context: String,
        residual: f64,
        iterations: u32,
    },
    /// Patch adjacency could not be established when stitching a sphere
    /// cover (unmatched or ambiguously matched edges).
    Topology(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::Solver {
                context,
                residual,
                iterations,
            } => write!(
                f,
                "solver error: {context} (residual {residual:.3e} after {iterations} iterations)"
            ),
            Error::Topology(msg) => write!(f, "topology error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
