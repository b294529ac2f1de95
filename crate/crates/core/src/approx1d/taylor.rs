use serde::{Deserialize, Serialize};

use super::ApproxError;

fn binomial(m: usize, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// `D_h^m(g, t) = h^{−m} Σ_j C(m, j)(−1)^{m−j} g(t + jh)` from the samples
/// `g(t), g(t + h), …, g(t + mh)`. Negative `h` is allowed.
pub fn divided_difference(samples: &[f64], m: usize, h: f64) -> Result<f64, ApproxError> {
    if samples.len() != m + 1 {
        return Err(ApproxError::SampleCount { expected: m + 1, got: samples.len() });
    }
    if h == 0.0 || !h.is_finite() {
        return Err(ApproxError::ZeroStep);
    }
    let sum: f64 = samples
        .iter()
        .enumerate()
        .map(|(j, &g)| {
            let sign = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m, j) * g
        })
        .sum();
    Ok(sum / h.powi(m as i32))
}

/// Taylor polynomial of order `m` anchored at `t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorExtrapolant {
    pub t0: f64,
    pub m: usize,
    /// Estimates of `g^(i)(t0)` for `i = 0..=m`.
    pub derivative_estimates: Vec<f64>,
}

impl TaylorExtrapolant {
    pub fn evaluate(&self, t1: f64) -> f64 {
        taylor_extrapolate(self, t1)
    }

    /// Derivative estimates `D_step^i(g, t0)` from `g(t0 + j·step)`, `j = 0..=m`.
    pub fn from_one_sided(t0: f64, samples: &[f64], m: usize, step: f64) -> Result<Self, ApproxError> {
        if samples.len() != m + 1 {
            return Err(ApproxError::SampleCount { expected: m + 1, got: samples.len() });
        }
        let derivative_estimates = (0..=m)
            .map(|i| divided_difference(&samples[..=i], i, step))
            .collect::<Result<_, _>>()?;
        Ok(Self { t0, m, derivative_estimates })
    }
}

/// `Σ_{i ≤ m} estimate_i / i! · (t1 − t0)^i`, evaluated by Horner.
pub fn taylor_extrapolate(ext: &TaylorExtrapolant, t1: f64) -> f64 {
    let dt = t1 - ext.t0;
    let mut acc = 0.0;
    for i in (0..ext.derivative_estimates.len()).rev() {
        acc = acc * dt / (i + 1) as f64 + ext.derivative_estimates[i];
    }
    acc
}

/// Backward estimates from `g(t0), g(t0 − h), …, g(t0 − mh)` with `h > 0`.
pub fn endpoint_derivative_estimates(
    t0: f64,
    samples: &[f64],
    m: usize,
    h: f64,
) -> Result<TaylorExtrapolant, ApproxError> {
    if !(h > 0.0) {
        return Err(ApproxError::NonPositiveStep(h));
    }
    TaylorExtrapolant::from_one_sided(t0, samples, m, -h)
}
