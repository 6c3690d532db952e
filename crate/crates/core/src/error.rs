use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// `k` lies within tolerance of a pole `-1/2 - n` of the normalized series.
    #[error("singular parameter k = {k} (within {tol:e} of -1/2 - {n})")]
    SingularParameter { k: Complex64, n: usize, tol: f64 },

    #[error("series did not converge after {terms} terms (|t| = {t_abs})")]
    NonConvergence { terms: usize, t_abs: f64 },

    #[error("tail bound {bound:e} at radius {radius} exceeds abs_tol {abs_tol:e}")]
    TailBound { radius: f64, bound: f64, abs_tol: f64 },

    #[error("quadrature did not reach tolerance: estimate {estimate:e}, change {change:e}")]
    QuadratureTolerance { estimate: f64, change: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
