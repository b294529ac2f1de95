use std::ops::Range;

use crate::approx1d::{quasi_interpolant, PiecewisePolynomial};
use crate::oracle::CountingOracle;
use crate::ridge::{l1_norm, sign_vector};

use super::RecoveryError;

fn scaled(v: &[f64], t: f64) -> Vec<f64> {
    v.iter().map(|x| t * x).collect()
}

fn query(oracle: &mut CountingOracle<'_>, x: &[f64], step: u8) -> Result<f64, RecoveryError> {
    oracle.query(x).map_err(|source| RecoveryError::Oracle { step, source })
}

/// Samples `f(j·h·v)` for `j = −n_g..=n_g`, `h = 1/n_g`, in ascending `j`.
fn line_samples(oracle: &mut CountingOracle<'_>, v: &[f64], n_g: usize, step: u8) -> Result<Vec<f64>, RecoveryError> {
    let n = n_g as i64;
    (-n..=n)
        .map(|j| query(oracle, &scaled(v, j as f64 / n_g as f64), step))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step1Outcome {
    FoundSlope {
        v: Vec<f64>,
        /// Left knot index of the steepest interval, in `−n_g..n_g`.
        j: i64,
        l_v: f64,
        f_left: f64,
        f_right: f64,
        scanned: u128,
        samples: Range<usize>,
    },
    NoLargeSlope {
        f_min: f64,
        f_max: f64,
        max_l_v: f64,
        scanned: u128,
        samples: Range<usize>,
    },
}

impl Step1Outcome {
    pub fn scanned(&self) -> u128 {
        match self {
            Self::FoundSlope { scanned, .. } | Self::NoLargeSlope { scanned, .. } => *scanned,
        }
    }
}

/// Scans vertices in order and stops at the first `v` with `L_v > n_g^{−r}`.
pub fn step1_scan<I>(oracle: &mut CountingOracle<'_>, vertices: I, n_g: usize, r: f64) -> Result<Step1Outcome, RecoveryError>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let threshold = (n_g as f64).powf(-r);
    let start = oracle.samples_used();
    let (mut f_min, mut f_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut max_l_v = 0.0f64;
    let mut scanned = 0u128;
    for v in vertices {
        scanned += 1;
        let vals = line_samples(oracle, &v, n_g, 1)?;
        let mut best = (0usize, -1.0f64);
        for (k, w) in vals.windows(2).enumerate() {
            let q = (w[1] - w[0]).abs() * n_g as f64;
            if q > best.1 {
                best = (k, q);
            }
        }
        for &y in &vals {
            f_min = f_min.min(y);
            f_max = f_max.max(y);
        }
        max_l_v = max_l_v.max(best.1);
        if best.1 > threshold {
            let (k, l_v) = best;
            return Ok(Step1Outcome::FoundSlope {
                v,
                j: k as i64 - n_g as i64,
                l_v,
                f_left: vals[k],
                f_right: vals[k + 1],
                scanned,
                samples: start..oracle.samples_used(),
            });
        }
    }
    if scanned == 0 {
        return Err(RecoveryError::InvalidParameter("empty vertex set".into()));
    }
    Ok(Step1Outcome::NoLargeSlope { f_min, f_max, max_l_v, scanned, samples: start..oracle.samples_used() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub t_mid: f64,
    pub delta: f64,
    /// Endpoint difference quotient of the final interval.
    pub quotient: f64,
}

/// Halves `[j·h, (j + 1)·h]` `n_b` times, keeping the half with the larger
/// endpoint difference (ties to the left). `ends` are the Step-1 values at
/// the two endpoints; each halving costs one sample.
pub fn step2_bisect(
    oracle: &mut CountingOracle<'_>,
    v: &[f64],
    j_star: i64,
    n_g: usize,
    n_b: usize,
    ends: (f64, f64),
) -> Result<Bisection, RecoveryError> {
    // Endpoints are `num / (n_g·2^level)` and `(num + 1) / (n_g·2^level)`.
    let mut num = j_star as i128;
    let (mut f_lo, mut f_hi) = ends;
    let at = |num: i128, level: usize| num as f64 / (n_g as f64 * 2f64.powi(level as i32));
    for level in 1..=n_b {
        num *= 2;
        let f_mid = query(oracle, &scaled(v, at(num + 1, level)), 2)?;
        if (f_hi - f_mid).abs() > (f_mid - f_lo).abs() {
            num += 1;
            f_lo = f_mid;
        } else {
            f_hi = f_mid;
        }
    }
    let width = 1.0 / (n_g as f64 * 2f64.powi(n_b as i32));
    Ok(Bisection {
        t_mid: at(2 * num + 1, n_b + 1),
        delta: width / 2.0,
        quotient: (f_hi - f_lo).abs() / width,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step3Outcome {
    /// `â = ã/‖ã‖₁`.
    pub direction: Vec<f64>,
    pub f_z0: f64,
    pub f_z1: f64,
}

/// Difference-quotient estimate of the ridge direction from `d + 3` samples.
pub fn step3_direction(oracle: &mut CountingOracle<'_>, v: &[f64], t_mid: f64, delta: f64) -> Result<Step3Outcome, RecoveryError> {
    let f_z0 = query(oracle, &scaled(v, t_mid - delta), 3)?;
    let f_z1 = query(oracle, &scaled(v, t_mid + delta), 3)?;
    let x0 = scaled(v, t_mid);
    let f_x0 = query(oracle, &x0, 3)?;
    let denom = f_z1 - f_z0;
    if denom == 0.0 {
        return Err(RecoveryError::DegenerateSlope { step: 3 });
    }
    let mut a_tilde = Vec::with_capacity(v.len());
    let mut x = x0.clone();
    for i in 0..v.len() {
        let (probe, flip) = if x0[i] + delta <= 1.0 { (x0[i] + delta, 1.0) } else { (x0[i] - delta, -1.0) };
        x[i] = probe;
        let f_xi = query(oracle, &x, 3)?;
        x[i] = x0[i];
        a_tilde.push(flip * 2.0 * (f_xi - f_x0) / denom);
    }
    let norm = l1_norm(&a_tilde);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(RecoveryError::DegenerateSlope { step: 3 });
    }
    Ok(Step3Outcome { direction: a_tilde.iter().map(|x| x / norm).collect(), f_z0, f_z1 })
}

/// Samples `f(j·h·sign(â))` and fits the quasi-interpolant.
pub fn step4_profile(oracle: &mut CountingOracle<'_>, a_hat: &[f64], n_g: usize, r0: usize) -> Result<PiecewisePolynomial, RecoveryError> {
    let vals = line_samples(oracle, &sign_vector(a_hat), n_g, 4)?;
    quasi_interpolant(&vals, 1.0 / n_g as f64, r0).map_err(|source| RecoveryError::Approx { step: 4, source })
}
