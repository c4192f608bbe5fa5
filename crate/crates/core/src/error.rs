use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("time step {dt} violates stability bound dt * rho(H) <= {limit} (rho = {rho})")]
    Stability { dt: f64, rho: f64, limit: f64 },

    #[error("norm drift {drift:e} exceeded tolerance {tol:e} at t = {t}")]
    NormDrift { drift: f64, tol: f64, t: f64 },

    #[error("eigensolver did not converge after {iterations} iterations ({converged} of {wanted} pairs, worst residual {worst_residual:e})")]
    Convergence {
        iterations: usize,
        converged: usize,
        wanted: usize,
        worst_residual: f64,
    },

    #[error("collapse-time derivative {0:e} is too small")]
    DegenerateDerivative(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
