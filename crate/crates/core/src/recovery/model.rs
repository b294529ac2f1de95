use serde::{Deserialize, Serialize};

use crate::approx1d::PiecewisePolynomial;
use crate::ridge::dot;

/// A recovered approximation `f̂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Constant { value: f64 },
    /// `f̂(x) = ĝ(âᵀx)` with `‖â‖₁ = 1`.
    Ridge { profile: PiecewisePolynomial, direction: Vec<f64> },
}

impl Model {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Ridge { profile, direction } => profile.eval(dot(direction, x)),
        }
    }

    pub fn direction(&self) -> Option<&[f64]> {
        match self {
            Self::Ridge { direction, .. } => Some(direction),
            Self::Constant { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// A large profile slope was found.
    A,
    /// No large slope; the constant midrange model is returned.
    B,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub chosen_v: Option<Vec<f64>>,
    pub j_star: Option<i64>,
    pub l_v: Option<f64>,
    pub t_mid: Option<f64>,
    pub delta: Option<f64>,
    /// `2|f(z₁) − f(z₀)|/δ > n_g^{−r}`, checked after bisection.
    pub step2_condition: Option<bool>,
    pub scanned_vertices: u128,
    pub exact_sample_count: u128,
    pub nominal_sample_count: u128,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub model: Model,
    pub samples_used: usize,
    pub scenario: Scenario,
    pub diagnostics: Diagnostics,
}
