use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RecoveryError;

/// How the Step-1 vertex set is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexMode {
    Randomized,
    Derandomized,
    Exhaustive,
}

impl FromStr for VertexMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "randomized" => Ok(Self::Randomized),
            "derandomized" => Ok(Self::Derandomized),
            "exhaustive" => Ok(Self::Exhaustive),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl fmt::Display for VertexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Randomized => "randomized",
            Self::Derandomized => "derandomized",
            Self::Exhaustive => "exhaustive",
        })
    }
}

/// Inputs to [`select_parameters`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterRequest {
    pub r: f64,
    pub p: f64,
    #[serde(rename = "S")]
    pub sparsity: usize,
    pub d: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: VertexMode,
    #[serde(rename = "C_r")]
    pub c_r: f64,
    pub c_r_spline: f64,
    pub seed: u64,
    /// Window size of the quasi-interpolant; defaults to `⌈r⌉ + 1`.
    pub r0: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryParams {
    pub r: f64,
    pub p: f64,
    #[serde(rename = "S")]
    pub sparsity: usize,
    pub d: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub mode: VertexMode,
    pub s: usize,
    pub n_v: u128,
    pub n_g: usize,
    pub n_b: usize,
    #[serde(rename = "C_r")]
    pub c_r: f64,
    pub c_r_spline: f64,
    pub seed: u64,
    pub r0: usize,
}

/// `⌈x⌉` that ignores round-off just above an integer.
fn ceil_tol(x: f64) -> f64 {
    (x * (1.0 - 1e-12)).ceil()
}

/// `ρ = min{r − 1, 1}`.
pub fn rho(r: f64) -> f64 {
    (r - 1.0).min(1.0)
}

/// `⌈ρ^{-1} log₂(4 n_g^{r−ρ}(3 + ε)/ε)⌉`.
pub fn bisection_depth(r: f64, n_g: usize, epsilon: f64) -> usize {
    let rho = rho(r);
    let arg = 4.0 * (n_g as f64).powf(r - rho) * (3.0 + epsilon) / epsilon;
    ceil_tol(arg.log2() / rho).max(0.0) as usize
}

/// `min{S·⌈(C_r/ε)^{1/(r(1/p−1))}⌉, d}`, or `d` at `p = 1`.
pub fn sparsity_level(c_r: f64, epsilon: f64, r: f64, p: f64, sparsity: usize, d: usize) -> usize {
    if p >= 1.0 {
        return d;
    }
    let k = ceil_tol((c_r / epsilon).powf(1.0 / (r * (1.0 / p - 1.0))));
    let s = sparsity as f64 * k;
    if s >= d as f64 {
        d
    } else {
        (s as usize).max(1)
    }
}

/// `⌈(max{10·c_spline, C_r}/ε)^{1/r}⌉`.
pub fn grid_size(c_r: f64, c_r_spline: f64, epsilon: f64, r: f64) -> usize {
    ceil_tol(((10.0 * c_r_spline).max(c_r) / epsilon).powf(1.0 / r)).max(1.0) as usize
}

/// Number of Step-1 vertices prescribed by each mode.
pub fn vertex_count(mode: VertexMode, s: usize, d: usize, delta: f64) -> Result<u128, RecoveryError> {
    let overflow = || RecoveryError::VertexCountOverflow { d, s };
    let pow = |k: usize| if k < 128 { Ok(1u128 << k) } else { Err(overflow()) };
    match mode {
        VertexMode::Exhaustive => pow(d),
        VertexMode::Randomized => {
            let reps = ceil_tol((1.0 / delta).ln()).max(1.0);
            pow(s)?.checked_mul(reps as u128).ok_or_else(overflow)
        }
        VertexMode::Derandomized => {
            let reps = ceil_tol(s as f64 * (d as f64 / s as f64).ln() + (1.0 / delta).ln()).max(1.0);
            if reps >= u128::MAX as f64 {
                return Err(overflow());
            }
            pow(s)?.checked_mul(reps as u128).ok_or_else(overflow)
        }
    }
}

/// `c̃_r = 2 + 4·c_spline + 2^m·m!` from the Scenario-B bound.
pub fn scenario_b_constant(r: f64, c_r_spline: f64) -> f64 {
    let m = r.ceil() as u32 - 1;
    let fact: f64 = (1..=m).map(f64::from).product();
    2.0 + 4.0 * c_r_spline + 2f64.powi(m as i32) * fact
}

/// `C_r = max{c_spline, c̃_r}`.
pub fn default_c_r(r: f64, c_r_spline: f64) -> f64 {
    c_r_spline.max(scenario_b_constant(r, c_r_spline))
}

fn invalid(msg: String) -> RecoveryError {
    RecoveryError::InvalidParameter(msg)
}

pub fn select_parameters(req: &ParameterRequest) -> Result<RecoveryParams, RecoveryError> {
    let ParameterRequest { r, p, sparsity, d, epsilon, delta, mode, c_r, c_r_spline, seed, r0 } = *req;
    if !(r > 1.0 && r.is_finite()) {
        return Err(invalid(format!("r = {r} must exceed 1")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("p = {p} outside (0, 1]")));
    }
    if d < 2 || sparsity < 1 || sparsity >= d {
        return Err(invalid(format!("need 1 <= S < d (S = {sparsity}, d = {d})")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} outside (0, 1)")));
    }
    if !(c_r > 0.0 && c_r.is_finite() && c_r_spline >= 0.0 && c_r_spline.is_finite()) {
        return Err(invalid(format!("constants C_r = {c_r}, c_spline = {c_r_spline}")));
    }
    let r0 = r0.unwrap_or(r.ceil() as usize + 1);
    if (r0 as f64) < r || r0 < 2 {
        return Err(invalid(format!("window size r0 = {r0} must satisfy r <= r0 and r0 >= 2")));
    }
    let s = sparsity_level(c_r, epsilon, r, p, sparsity, d);
    let n_g = grid_size(c_r, c_r_spline, epsilon, r).max(r0);
    Ok(RecoveryParams {
        r,
        p,
        sparsity,
        d,
        epsilon,
        delta,
        mode,
        s,
        n_v: vertex_count(mode, s, d, delta)?,
        n_g,
        n_b: bisection_depth(r, n_g, epsilon),
        c_r,
        c_r_spline,
        seed,
        r0,
    })
}

impl RecoveryParams {
    /// Vertices actually available to Step 1: `min{n_v, 2^d}`.
    pub fn effective_vertices(&self) -> u128 {
        if self.d < 128 {
            self.n_v.min(1u128 << self.d)
        } else {
            self.n_v
        }
    }

    /// Samples spent by a run that scanned `scanned` vertices.
    pub fn exact_sample_count(&self, scanned: u128, scenario_a: bool) -> u128 {
        let per_vertex = 2 * self.n_g as u128 + 1;
        let tail = if scenario_a { (self.n_b + self.d + 3) as u128 + per_vertex } else { 0 };
        scanned.saturating_mul(per_vertex).saturating_add(tail)
    }

    /// All vertices scanned and Scenario A at the end.
    pub fn worst_case_samples(&self) -> u128 {
        self.exact_sample_count(self.effective_vertices(), true)
    }

    /// `n' = n_v n_g + n_g + n_b + d`.
    pub fn nominal_sample_count(&self) -> u128 {
        self.n_v
            .saturating_mul(self.n_g as u128)
            .saturating_add((self.n_g + self.n_b + self.d) as u128)
    }
}
