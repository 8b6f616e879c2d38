use thiserror::Error;

/// Errors surfaced by the simulator core.
#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "quadrature did not converge within {max_subdivisions} subdivisions \
         (achieved error estimate {achieved:.3e}, requested {requested:.3e})"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        requested: f64,
        max_subdivisions: usize,
    },

    #[error("coefficient source does not cover t = {t} (table ends at {t_max})")]
    CoefficientOutOfRange { t: f64, t_max: f64 },

    #[error("step size underflow at t = {t} (dt = {dt:.3e} < dt_min = {dt_min:.3e})")]
    StepSizeUnderflow { t: f64, dt: f64, dt_min: f64 },

    #[error("eigensolver failed to converge: {0}")]
    EigenSolver(String),

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
