//! Configuration, instance generation, error estimation, sweeps and
//! calibration.

pub mod calibrate;
pub mod config;
pub mod estimate;
pub mod instances;
pub mod sweep;

pub use calibrate::{calibrate_spline_constant, calibration_profiles, default_spline_constant};
pub use config::{AlgorithmKind, ExperimentConfig, LowerBoundConfig, LowerBoundKind};
pub use estimate::{sup_error_estimate, ErrorEstimate, EstimateMethod, EstimateOptions};
pub use instances::{draw_instance, draw_profile, draw_ridge_vector, ProfileFamily};
pub use sweep::{budget_epsilon, regime_label, run_sweep, summarize, SweepRow, SweepSummary};

use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::recovery::RecoveryError;
use crate::ridge::RidgeError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("i/o: {0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Ridge(#[from] RidgeError),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
}

impl HarnessError {
    pub fn category(&self) -> &'static str {
        match self {
            Self::Io(_) => "io",
            Self::Config(_) => "config",
            Self::DimensionMismatch { .. } => "dimension_mismatch",
            Self::Ridge(_) => "invalid_instance",
            Self::Recovery(e) => e.category(),
            Self::Adversary(e) => e.category(),
        }
    }
}
