use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::calibrate::default_spline_constant;
use super::instances::ProfileFamily;
use super::HarnessError;
use crate::recovery::{default_c_r, select_parameters, ParameterRequest, RecoveryParams, VertexMode};
use crate::ridge::RidgeClass;

fn default_resolution() -> usize {
    400
}

fn default_random_samples() -> usize {
    2000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundKind {
    Deterministic,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    ZeroModel,
    Recover,
    UniformRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConfig {
    pub kind: LowerBoundKind,
    pub algorithm: AlgorithmKind,
    pub n: usize,
    #[serde(default)]
    pub num_seeds: Option<usize>,
    #[serde(default)]
    pub sparsity: Option<usize>,
}

/// One JSON document describing an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub d: usize,
    pub r: f64,
    pub p: f64,
    #[serde(rename = "S")]
    pub sparsity: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: VertexMode,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub budget_grid: Vec<usize>,
    pub profile_family: ProfileFamily,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default = "default_resolution")]
    pub error_grid_resolution: usize,
    #[serde(default = "default_random_samples")]
    pub random_samples: usize,
    #[serde(default)]
    pub c_r_spline: Option<f64>,
    #[serde(default, rename = "C_r")]
    pub c_r: Option<f64>,
    #[serde(default)]
    pub r0: Option<usize>,
    #[serde(default)]
    pub lower_bound: Option<LowerBoundConfig>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.seeds.is_empty() {
            return Err(HarnessError::Config("at least one seed is required".into()));
        }
        if self.error_grid_resolution < 2 {
            return Err(HarnessError::Config("error_grid_resolution must be at least 2".into()));
        }
        select_parameters(&self.request(self.epsilon, self.seeds[0]))?;
        Ok(())
    }

    pub fn r0(&self) -> usize {
        self.r0.unwrap_or(self.r.ceil() as usize + 1)
    }

    pub fn spline_constant(&self) -> f64 {
        self.c_r_spline.unwrap_or_else(|| default_spline_constant(self.r, self.r0()))
    }

    pub fn recovery_constant(&self) -> f64 {
        self.c_r.unwrap_or_else(|| default_c_r(self.r, self.spline_constant()))
    }

    pub fn class(&self) -> RidgeClass {
        RidgeClass::sparse(self.p, self.sparsity)
    }

    pub fn request(&self, epsilon: f64, seed: u64) -> ParameterRequest {
        let c_r_spline = self.spline_constant();
        ParameterRequest {
            r: self.r,
            p: self.p,
            sparsity: self.sparsity,
            d: self.d,
            epsilon,
            delta: self.delta,
            mode: self.mode,
            c_r: self.c_r.unwrap_or_else(|| default_c_r(self.r, c_r_spline)),
            c_r_spline,
            seed,
            r0: self.r0,
        }
    }

    pub fn params(&self, seed: u64) -> Result<RecoveryParams, HarnessError> {
        Ok(select_parameters(&self.request(self.epsilon, seed))?)
    }

    /// Pins the calibrated constants so repeated parameter selection does
    /// not recalibrate.
    pub fn with_constants(mut self) -> Self {
        let c = self.spline_constant();
        self.c_r_spline = Some(c);
        self.c_r = Some(self.recovery_constant());
        self
    }
}
