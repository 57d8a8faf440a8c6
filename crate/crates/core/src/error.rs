use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    /// Node doubling did not reach the requested tolerance.
    #[error("quadrature did not converge: {nodes} nodes, last change {delta:e} exceeds {tol:e}")]
    QuadratureNotConverged { nodes: usize, delta: f64, tol: f64 },

    /// The upper end of the fixed-point bracket ran past its cap.
    #[error("could not bracket the fixed point: upper end exceeded {limit:e}")]
    BracketFailure { limit: f64 },

    /// Bisection hit its width floor before the residual met the tolerance.
    #[error("fixed point residual {residual:e} above tolerance {tol:e} at bracket width floor")]
    SolverStalled { residual: f64, tol: f64 },

    /// Time-to-position inversion of the trajectory failed.
    #[error("trajectory inversion failed at t = {t}")]
    Inversion { t: f64 },
}

impl Error {
    /// True for errors caused by numerical non-convergence rather than bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
