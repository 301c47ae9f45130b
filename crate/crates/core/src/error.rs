use std::fmt;

use crate::grid::Side;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("expected a {expected} function, got a {found} one")]
    SideMismatch { expected: Side, found: Side },

    #[error("point (x = {x}, xi = {xi}) lies outside the grid coverage")]
    OutOfDomain { x: f64, xi: f64 },

    /// The integrand is still significant at the edge of the frequency window.
    #[error(
        "integrand does not decay inside the frequency window: tail estimate {tail:.3e} exceeds budget {budget:.3e}"
    )]
    Truncation { tail: f64, budget: f64 },

    #[error("exponent regime violated: {0}")]
    Regime(String),

    #[error("factor functions do not share one grid")]
    GridMismatch,

    #[error("rank {rank} is not admissible for a matrix of size {size}")]
    Rank { rank: usize, size: usize },

    #[error("phase regime: {0}")]
    PhaseRegime(String),

    #[error("eigen-solver failed: {0}")]
    Solver(String),

    #[error("computation cancelled")]
    Cancelled,
}

impl Error {
    pub(crate) fn domain(msg: impl fmt::Display) -> Self {
        Error::ParameterDomain(msg.to_string())
    }
}
