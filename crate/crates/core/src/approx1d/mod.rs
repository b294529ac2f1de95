//! Univariate approximation from equispaced samples: local quasi-interpolation,
//! divided differences and endpoint Taylor extrapolation.

mod spline;
mod taylor;

pub use spline::{local_lebesgue_constant, quasi_interpolant, PiecewisePolynomial};
pub use taylor::{divided_difference, endpoint_derivative_estimates, taylor_extrapolate, TaylorExtrapolant};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("need n >= r0 (got n = {n}, r0 = {r0})")]
    TooFewKnots { n: usize, r0: usize },
    #[error("window size r0 = {0} must be at least 2")]
    WindowTooSmall(usize),
    #[error("step size {0} must be positive")]
    NonPositiveStep(f64),
    #[error("step size must be nonzero")]
    ZeroStep,
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
}
