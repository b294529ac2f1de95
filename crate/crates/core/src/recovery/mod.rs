//! Ridge-function recovery from point samples.
//!
//! 1. Scan a vertex set `V ⊂ {−1, 1}^d` along the diagonals `t·v` for a
//!    profile slope above `n_g^{−r}`; without one, return the midrange constant.
//! 2. Bisect the steepest grid interval `n_b` times.
//! 3. Estimate the direction `â` by difference quotients at the refined point.
//! 4. Fit a quasi-interpolant to `t ↦ f(t·sign(â))`.
//! 5. Return `f̂(x) = ĝ(âᵀx)`.

mod model;
mod params;
mod sparsity;
mod steps;
mod vertices;

pub use model::{Diagnostics, Model, RecoveryResult, Scenario};
pub use params::{
    bisection_depth, default_c_r, grid_size, rho, scenario_b_constant, select_parameters, sparsity_level,
    vertex_count, ParameterRequest, RecoveryParams, VertexMode,
};
pub use sparsity::{best_s_term_error, hit_membership, top_indices};
pub use steps::{step1_scan, step2_bisect, step3_direction, step4_profile, Bisection, Step1Outcome, Step3Outcome};
pub use vertices::{build_vertex_set, exhaustive_vertex_set, VertexIter, VertexSet};

use thiserror::Error;

use crate::approx1d::ApproxError;
use crate::oracle::{CountingOracle, OracleError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RecoveryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex count overflows for d = {d}, s = {s}")]
    VertexCountOverflow { d: usize, s: usize },
    #[error("step {step}: {source}")]
    Oracle { step: u8, source: OracleError },
    #[error("step {step}: endpoint difference vanished")]
    DegenerateSlope { step: u8 },
    #[error("step {step}: {source}")]
    Approx { step: u8, source: ApproxError },
}

impl RecoveryError {
    /// Stable machine-readable category.
    pub fn category(&self) -> &'static str {
        match self {
            Self::InvalidParameter(_) => "invalid_parameter",
            Self::VertexCountOverflow { .. } => "vertex_count_overflow",
            Self::Oracle { source: OracleError::BudgetExhausted { .. }, .. } => "budget_exhausted",
            Self::Oracle { source: OracleError::DomainViolation { .. }, .. } => "domain_violation",
            Self::Oracle { source: OracleError::DimensionMismatch { .. }, .. } => "dimension_mismatch",
            Self::DegenerateSlope { .. } => "degenerate_slope",
            Self::Approx { .. } => "approximation",
        }
    }

    pub fn is_budget_exhausted(&self) -> bool {
        matches!(self, Self::Oracle { source: OracleError::BudgetExhausted { .. }, .. })
    }
}

/// Vertex set prescribed by `params`.
pub fn vertex_set(params: &RecoveryParams) -> Result<VertexSet, RecoveryError> {
    match params.mode {
        VertexMode::Exhaustive => exhaustive_vertex_set(params.d),
        _ => build_vertex_set(params.d, params.n_v, params.seed),
    }
}

/// Runs steps 1–5 against `oracle`.
pub fn recover(oracle: &mut CountingOracle<'_>, params: &RecoveryParams) -> Result<RecoveryResult, RecoveryError> {
    if oracle.dim() != params.d {
        return Err(RecoveryError::InvalidParameter(format!(
            "oracle dimension {} differs from d = {}",
            oracle.dim(),
            params.d
        )));
    }
    let start = oracle.samples_used();
    let vertices = vertex_set(params)?;
    let mut diag = Diagnostics { nominal_sample_count: params.nominal_sample_count(), ..Default::default() };
    let outcome = step1_scan(oracle, vertices.iter(), params.n_g, params.r)?;
    diag.scanned_vertices = outcome.scanned();

    let (model, scenario) = match outcome {
        Step1Outcome::NoLargeSlope { f_min, f_max, max_l_v, .. } => {
            diag.l_v = Some(max_l_v);
            diag.notes.push(format!("no slope above n_g^-r = {:.3e}", (params.n_g as f64).powf(-params.r)));
            (Model::Constant { value: 0.5 * (f_min + f_max) }, Scenario::B)
        }
        Step1Outcome::FoundSlope { v, j, l_v, f_left, f_right, .. } => {
            let bis = step2_bisect(oracle, &v, j, params.n_g, params.n_b, (f_left, f_right))?;
            let dir = step3_direction(oracle, &v, bis.t_mid, bis.delta)?;
            let threshold = (params.n_g as f64).powf(-params.r);
            let holds = 2.0 * (dir.f_z1 - dir.f_z0).abs() / bis.delta > threshold;
            if !holds {
                diag.notes.push("refined interval fails the step-2 slope condition".into());
            }
            let profile = step4_profile(oracle, &dir.direction, params.n_g, params.r0)?;
            diag.chosen_v = Some(v);
            diag.j_star = Some(j);
            diag.l_v = Some(l_v);
            diag.t_mid = Some(bis.t_mid);
            diag.delta = Some(bis.delta);
            diag.step2_condition = Some(holds);
            (Model::Ridge { profile, direction: dir.direction }, Scenario::A)
        }
    };
    let samples_used = oracle.samples_used() - start;
    diag.exact_sample_count = params.exact_sample_count(diag.scanned_vertices, scenario == Scenario::A);
    debug_assert_eq!(diag.exact_sample_count, samples_used as u128);
    Ok(RecoveryResult { model, samples_used, scenario, diagnostics: diag })
}
