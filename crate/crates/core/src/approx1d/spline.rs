use serde::{Deserialize, Serialize};

use super::taylor::TaylorExtrapolant;
use super::ApproxError;

/// Piecewise polynomial on the knots `i·h`, `i = −n..=n`.
///
/// Interval `k` covers `[(k − n)h, (k − n + 1)h]`; its coefficients are
/// monomial in the local coordinate `u = (t − (k − n)h)/h`. Outside the knot
/// span the endpoint Taylor extrapolants apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    pub h: f64,
    pub n: usize,
    pub degree: usize,
    pub coeffs: Vec<Vec<f64>>,
    pub left: TaylorExtrapolant,
    pub right: TaylorExtrapolant,
}

impl PiecewisePolynomial {
    pub fn span(&self) -> (f64, f64) {
        let e = self.n as f64 * self.h;
        (-e, e)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (lo, hi) = self.span();
        if t > hi {
            return self.right.evaluate(t);
        }
        if t < lo {
            return self.left.evaluate(t);
        }
        let last = 2 * self.n - 1;
        let k = ((t / self.h).floor() + self.n as f64).clamp(0.0, last as f64) as usize;
        let left = (k as f64 - self.n as f64) * self.h;
        let u = (t - left) / self.h;
        self.coeffs[k].iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    /// Largest absolute value on a uniform grid of `per_interval` points per
    /// interval, endpoints included.
    pub fn sup_on_span(&self, per_interval: usize) -> f64 {
        let (lo, _) = self.span();
        let total = 2 * self.n * per_interval.max(1);
        (0..=total)
            .map(|i| self.eval(lo + 2.0 * self.n as f64 * self.h * i as f64 / total as f64).abs())
            .fold(0.0, f64::max)
    }
}

/// Knot window offset for interval `k`, in global knot index `0..=2n`.
fn window_start(k: usize, n: usize, r0: usize) -> usize {
    let back = (r0 - 1) / 2;
    k.saturating_sub(back).min(2 * n + 1 - r0)
}

/// Monomial coefficients of the Lagrange basis for integer nodes `nodes`.
fn lagrange_basis(nodes: &[f64]) -> Vec<Vec<f64>> {
    nodes
        .iter()
        .enumerate()
        .map(|(j, &uj)| {
            let mut poly = vec![1.0];
            let mut denom = 1.0;
            for (i, &ui) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut next = vec![0.0; poly.len() + 1];
                for (p, &c) in poly.iter().enumerate() {
                    next[p + 1] += c;
                    next[p] -= ui * c;
                }
                poly = next;
                denom *= uj - ui;
            }
            poly.iter().map(|c| c / denom).collect()
        })
        .collect()
}

fn window_nodes(start: usize, k: usize, r0: usize) -> Vec<f64> {
    (0..r0).map(|j| (start + j) as f64 - k as f64).collect()
}

/// Local Lagrange quasi-interpolant of `values[i + n] = g(i·h)`, `i = −n..=n`,
/// on sliding windows of `r0` knots clamped at the ends.
pub fn quasi_interpolant(values: &[f64], h: f64, r0: usize) -> Result<PiecewisePolynomial, ApproxError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ApproxError::NonPositiveStep(h));
    }
    if r0 < 2 {
        return Err(ApproxError::WindowTooSmall(r0));
    }
    if values.len() % 2 == 0 {
        return Err(ApproxError::SampleCount { expected: values.len() + 1, got: values.len() });
    }
    let n = values.len() / 2;
    if n < r0 {
        return Err(ApproxError::TooFewKnots { n, r0 });
    }
    let mut coeffs = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        let start = window_start(k, n, r0);
        let basis = lagrange_basis(&window_nodes(start, k, r0));
        let mut c = vec![0.0; r0];
        for (j, b) in basis.iter().enumerate() {
            let y = values[start + j];
            for (p, &bc) in b.iter().enumerate() {
                c[p] += y * bc;
            }
        }
        coeffs.push(c);
    }
    let m = r0 - 2;
    let e = n as f64 * h;
    let right_samples: Vec<f64> = (0..=m).map(|j| values[2 * n - j]).collect();
    let left_samples: Vec<f64> = (0..=m).map(|j| values[j]).collect();
    Ok(PiecewisePolynomial {
        h,
        n,
        degree: r0 - 1,
        coeffs,
        left: TaylorExtrapolant::from_one_sided(-e, &left_samples, m, h)?,
        right: TaylorExtrapolant::from_one_sided(e, &right_samples, m, -h)?,
    })
}

/// Numerical Lebesgue constant of the local windows of size `r0`, with a
/// small slack for the sampling of the Lebesgue function.
pub fn local_lebesgue_constant(r0: usize) -> f64 {
    assert!(r0 >= 2, "window size must be at least 2");
    let mut best = 0.0f64;
    for offset in 0..r0 - 1 {
        let nodes: Vec<f64> = (0..r0).map(|j| j as f64 - offset as f64).collect();
        let basis = lagrange_basis(&nodes);
        for step in 0..=2000 {
            let u = step as f64 / 2000.0;
            let s: f64 = basis
                .iter()
                .map(|b| b.iter().rev().fold(0.0, |acc, &c| acc * u + c).abs())
                .sum();
            best = best.max(s);
        }
    }
    best * (1.0 + 1e-6)
}
