//! Empirical constant of the quasi-interpolation bound `‖g − Q_h g‖∞ ≤ c·h^r`.

use super::HarnessError;
use crate::approx1d::quasi_interpolant;
use crate::ridge::{truncated_power, Profile};

const SAFETY: f64 = 1.5;
const FLOOR: f64 = 1e-3;
const POINTS_PER_INTERVAL: usize = 16;

/// Sup error of the quasi-interpolant on knots `i/n`, `i = −n..=n`, over a
/// dense grid of `[-1, 1]`.
pub fn interpolation_error(g: &Profile, n: usize, r0: usize) -> Result<f64, HarnessError> {
    let h = 1.0 / n as f64;
    let vals: Vec<f64> = (-(n as i64)..=n as i64).map(|i| g.evaluate(i as f64 * h)).collect::<Result<_, _>>()?;
    let pp = quasi_interpolant(&vals, h, r0).map_err(|e| HarnessError::Config(e.to_string()))?;
    let total = 2 * n * POINTS_PER_INTERVAL;
    let mut err = 0.0f64;
    for k in 0..=total {
        let t = (-1.0 + 2.0 * k as f64 / total as f64).clamp(-1.0, 1.0);
        err = err.max((g.evaluate(t)? - pp.eval(t)).abs());
    }
    Ok(err)
}

/// `1.5 · max err(h)/h^r` over profiles and grid levels `n` (with `h = 1/n`),
/// never below `1e-3`.
pub fn calibrate_spline_constant(r0: usize, profiles: &[Profile], levels: &[usize]) -> Result<f64, HarnessError> {
    if levels.len() < 3 {
        return Err(HarnessError::Config("calibration needs at least three grid levels".into()));
    }
    let mut worst = 0.0f64;
    for g in profiles {
        for &n in levels {
            let h = 1.0 / n as f64;
            worst = worst.max(interpolation_error(g, n, r0)? / h.powf(g.r()));
        }
    }
    Ok((SAFETY * worst).max(FLOOR))
}

/// Unit-norm sines and truncated powers of regularity `r`.
pub fn calibration_profiles(r: f64) -> Vec<Profile> {
    let mut out = Vec::new();
    for (omega, phase) in [(1.0, 0.3), (2.0, 1.1), (3.0, 0.0), (4.0, 2.0)] {
        out.push(Profile::sine(1.0, omega, phase, r).and_then(|p| p.normalized()).expect("valid sine"));
    }
    for tau in [-0.55, -0.1, 0.3] {
        out.push(truncated_power(r, tau).and_then(|p| p.normalized()).expect("valid truncated power"));
    }
    out
}

pub const DEFAULT_LEVELS: [usize; 3] = [8, 16, 32];

/// Calibrated constant over [`calibration_profiles`] at [`DEFAULT_LEVELS`].
pub fn default_spline_constant(r: f64, r0: usize) -> f64 {
    calibrate_spline_constant(r0, &calibration_profiles(r), &DEFAULT_LEVELS).expect("built-in calibration")
}
