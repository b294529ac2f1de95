use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AdversaryError;
use crate::ridge::{dot, l1_norm, lp_norm, truncated_power_profile, FoolingProfile, RidgeClass, RidgeFunction};

/// An `s`-sparse vector with entries `±s^{−1/p}` on the first `s` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoolingVector {
    pub a: Vec<f64>,
    pub s: usize,
    pub p: f64,
    pub tries_used: u64,
}

impl FoolingVector {
    /// `‖a‖₁ = s^{1−1/p}`.
    pub fn lambda(&self) -> f64 {
        l1_norm(&self.a)
    }

    /// Whether `aᵀz < ‖a‖₁/2` for every point.
    pub fn fools<'a, I: IntoIterator<Item = &'a [f64]>>(&self, points: I) -> bool {
        let half = self.lambda() / 2.0;
        points.into_iter().all(|z| dot(&self.a, z) < half)
    }
}

/// `⌈100/(1 − n e^{−s/8})⌉` when the denominator is positive, else `10⁶`.
pub fn default_max_tries(n: usize, s: usize) -> u64 {
    let q = 1.0 - n as f64 * (-(s as f64) / 8.0).exp();
    if q > 0.0 {
        (100.0 / q).ceil() as u64
    } else {
        1_000_000
    }
}

pub(crate) fn sign_pattern(d: usize, s: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mag = (s as f64).powf(-1.0 / p);
    let mut a = vec![0.0; d];
    for x in a.iter_mut().take(s) {
        *x = if rng.gen::<bool>() { mag } else { -mag };
    }
    a
}

/// Rejection-samples sign patterns until `aᵀz < ‖a‖₁/2` holds on every point.
pub fn fooling_vector(
    points: &[Vec<f64>],
    d: usize,
    s: usize,
    p: f64,
    seed: u64,
    max_tries: Option<u64>,
) -> Result<FoolingVector, AdversaryError> {
    if s == 0 || s > d {
        return Err(AdversaryError::InvalidParameter(format!("sparsity s = {s} outside 1..={d}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(AdversaryError::InvalidParameter(format!("p = {p} outside (0, 1]")));
    }
    if let Some(z) = points.iter().find(|z| z.len() != d || z.iter().any(|x| !(x.abs() <= 1.0))) {
        return Err(AdversaryError::InvalidParameter(format!("point {z:?} is not in [-1, 1]^{d}")));
    }
    let max_tries = max_tries.unwrap_or_else(|| default_max_tries(points.len(), s));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for tries_used in 1..=max_tries {
        let fv = FoolingVector { a: sign_pattern(d, s, p, &mut rng), s, p, tries_used };
        if fv.fools(points.iter().map(|z| z.as_slice())) {
            debug_assert!((lp_norm(&fv.a, p) - 1.0).abs() < 1e-9);
            return Ok(fv);
        }
    }
    Err(AdversaryError::MaxTriesExceeded { max_tries })
}

/// `f*(x) = g*(a*ᵀx)` with the normalized truncated power at `λ = ‖a*‖₁`.
#[derive(Debug, Clone)]
pub struct FoolingInstance {
    pub vector: FoolingVector,
    pub profile: FoolingProfile,
    pub function: RidgeFunction,
}

impl FoolingInstance {
    /// `‖f*‖∞ = (λ/2)^r / ‖g_λ‖_Lip(r)`, attained at `sign(a*)`.
    pub fn sup_norm(&self) -> f64 {
        self.profile.peak()
    }
}

pub fn fooling_instance(fv: &FoolingVector, r: f64) -> Result<FoolingInstance, AdversaryError> {
    let profile = truncated_power_profile(r, fv.lambda()).map_err(AdversaryError::Ridge)?;
    let function = RidgeFunction::new(profile.profile().clone(), fv.a.clone(), RidgeClass::compressible(fv.p))
        .map_err(AdversaryError::Ridge)?;
    Ok(FoolingInstance { vector: fv.clone(), profile, function })
}
