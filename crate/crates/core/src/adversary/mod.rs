//! Fooling instances and lower-bound experiments.
//!
//! A deterministic sampler is run on the zero function; a sparse sign vector
//! `a*` is then drawn so that every query point falls into the dead zone of
//! the truncated power `max{0, t − ‖a*‖₁/2}^r`. The sampler sees only zeros on
//! `±f*`, returns the same model for both, and so errs by at least `‖f*‖∞` on
//! one of them.

mod algorithms;
mod bounds;
mod experiment;
mod fooling;

pub use algorithms::{RecoverAlgorithm, SamplingAlgorithm, SeededRecoverAlgorithm, UniformRandomAlgorithm, ZeroModelAlgorithm};
pub use bounds::{c_r, c_r_randomized, lower_bound_value, randomized_lower_bound_value};
pub use experiment::{
    det_lower_bound_experiment, deterministic_sparsity, ran_lower_bound_experiment, randomized_sparsity,
    LowerBoundReport, RandomizedConfig, RandomizedReport,
};
pub use fooling::{default_max_tries, fooling_instance, fooling_vector, FoolingInstance, FoolingVector};

use thiserror::Error;

use crate::ridge::RidgeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("outside the lower-bound regime: {0}")]
    Regime(String),
    #[error("no fooling pattern within {max_tries} tries")]
    MaxTriesExceeded { max_tries: u64 },
    #[error("queries on {sign}f* differ from the zero-input queries")]
    LedgerDivergence { sign: String },
    #[error("best fooling fraction {best_fraction} does not exceed delta = {delta}")]
    NoFoolingCandidate { best_fraction: f64, delta: f64 },
    #[error(transparent)]
    Ridge(#[from] RidgeError),
    #[error("error estimate failed: {0}")]
    Estimate(String),
}

impl AdversaryError {
    pub fn category(&self) -> &'static str {
        match self {
            Self::InvalidParameter(_) => "invalid_parameter",
            Self::Regime(_) => "regime_violation",
            Self::MaxTriesExceeded { .. } => "max_tries_exceeded",
            Self::LedgerDivergence { .. } => "ledger_divergence",
            Self::NoFoolingCandidate { .. } => "no_fooling_candidate",
            Self::Ridge(_) => "invalid_instance",
            Self::Estimate(_) => "estimate_failed",
        }
    }
}
