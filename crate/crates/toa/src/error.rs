use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ToaError {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("quadrature did not converge: best estimate {value}, achieved abs error {abs_error:.3e}")]
    QuadratureNotConverged { value: Complex64, abs_error: f64 },

    #[error("grid resolution too coarse: n_log = {n_log} cannot resolve the low-momentum envelope, need at least {required_n_log}")]
    GridResolution { n_log: usize, required_n_log: usize },

    #[error("states live on different grids")]
    GridMismatch,

    #[error("grid not converged: doubling the resolution moved the result by {delta:.3e} (limit {limit:.3e})")]
    GridConvergence { delta: f64, limit: f64 },

    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, ToaError>;

impl ToaError {
    pub fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        ToaError::Domain { what, detail: detail.into() }
    }
}
