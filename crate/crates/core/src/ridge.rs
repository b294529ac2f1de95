//! Profiles, ridge functions and Lipschitz-scale bookkeeping.
//!
//! Hölder constants use the divisor-2 convention
//! `|g|_β = sup |g(u) − g(v)| / (2·min{1, |u − v|}^β)`, and the Lipschitz norm
//! of order `r` is `max{‖g‖∞, ‖g′‖∞, …, ‖g^(m)‖∞, |g^(m)|_β}` with `m` the
//! largest integer strictly below `r`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Shared scalar map used for profile values and derivative evaluators.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RidgeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate {index} = {value} lies outside [-1, 1]")]
    OutsideCube { index: usize, value: f64 },
    #[error("t = {t} lies outside the profile interval [{lo}, {hi}]")]
    OutsideDomain { t: f64, lo: f64, hi: f64 },
    #[error("derivative of order {order} is not available")]
    MissingDerivatives { order: usize },
    #[error("grid needs at least two distinct points")]
    DegenerateGrid,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Regularity `r` split as `r = m + β` with `m < r ≤ m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Smoothness {
    r: f64,
    m: usize,
    beta: f64,
}

impl Smoothness {
    pub fn new(r: f64) -> Result<Self, RidgeError> {
        if !(r.is_finite() && r > 0.0) {
            return Err(RidgeError::InvalidParameter(format!("regularity r = {r} must be positive")));
        }
        let m = r.ceil() as usize - 1;
        Ok(Self { r, m, beta: r - m as f64 })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// How a stored Lipschitz norm was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Exact,
    UpperBound,
    /// Grid maximization; never exceeds the true norm.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipNorm {
    pub value: f64,
    pub kind: NormKind,
}

/// A univariate function on `[lo, hi]` with regularity metadata.
#[derive(Clone)]
pub struct Profile {
    value: ScalarFn,
    derivatives: Vec<ScalarFn>,
    smoothness: Smoothness,
    lo: f64,
    hi: f64,
    lip_norm: Option<LipNorm>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Profile")
            .field("r", &self.smoothness.r)
            .field("domain", &(self.lo, self.hi))
            .field("derivatives", &self.derivatives.len())
            .field("lip_norm", &self.lip_norm)
            .finish()
    }
}

impl Profile {
    pub fn new<F>(lo: f64, hi: f64, r: f64, value: F) -> Result<Self, RidgeError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(RidgeError::InvalidParameter(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(Self {
            value: Arc::new(value),
            derivatives: Vec::new(),
            smoothness: Smoothness::new(r)?,
            lo,
            hi,
            lip_norm: None,
        })
    }

    /// Attaches evaluators for orders `1..=derivs.len()`.
    pub fn with_derivatives(mut self, derivs: Vec<ScalarFn>) -> Self {
        self.derivatives = derivs;
        self
    }

    pub fn with_lip_norm(mut self, value: f64, kind: NormKind) -> Self {
        self.lip_norm = Some(LipNorm { value, kind });
        self
    }

    pub fn r(&self) -> f64 {
        self.smoothness.r
    }

    pub fn m(&self) -> usize {
        self.smoothness.m
    }

    pub fn beta(&self) -> f64 {
        self.smoothness.beta
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn lip_norm(&self) -> Option<LipNorm> {
        self.lip_norm
    }

    pub fn derivative_orders(&self) -> usize {
        self.derivatives.len()
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    fn check(&self, t: f64) -> Result<(), RidgeError> {
        if t >= self.lo && t <= self.hi {
            Ok(())
        } else {
            Err(RidgeError::OutsideDomain { t, lo: self.lo, hi: self.hi })
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64, RidgeError> {
        self.check(t)?;
        Ok((self.value)(t))
    }

    /// `order = 0` is the value itself.
    pub fn derivative(&self, order: usize, t: f64) -> Result<f64, RidgeError> {
        self.check(t)?;
        if order == 0 {
            return Ok((self.value)(t));
        }
        self.derivatives
            .get(order - 1)
            .map(|d| d(t))
            .ok_or(RidgeError::MissingDerivatives { order })
    }

    /// `k·g`; derivatives and norm scale along.
    pub fn scaled(&self, k: f64) -> Self {
        let v = self.value.clone();
        let derivatives = self
            .derivatives
            .iter()
            .map(|d| {
                let d = d.clone();
                Arc::new(move |t| k * d(t)) as ScalarFn
            })
            .collect();
        Self {
            value: Arc::new(move |t| k * v(t)),
            derivatives,
            smoothness: self.smoothness,
            lo: self.lo,
            hi: self.hi,
            lip_norm: self.lip_norm.map(|n| LipNorm { value: n.value * k.abs(), kind: n.kind }),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// `t ↦ g(c·t)` on the preimage interval. The norm is dropped because it
    /// is not invariant under argument scaling.
    pub fn rescaled_argument(&self, c: f64) -> Result<Self, RidgeError> {
        if !(c.is_finite() && c != 0.0) {
            return Err(RidgeError::InvalidParameter(format!("argument scale {c}")));
        }
        let v = self.value.clone();
        let derivatives = self
            .derivatives
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let d = d.clone();
                let factor = c.powi(i as i32 + 1);
                Arc::new(move |t| factor * d(c * t)) as ScalarFn
            })
            .collect();
        let (a, b) = (self.lo / c, self.hi / c);
        Ok(Self {
            value: Arc::new(move |t| v(c * t)),
            derivatives,
            smoothness: self.smoothness,
            lo: a.min(b),
            hi: a.max(b),
            lip_norm: None,
        })
    }

    /// Divides by the stored norm so the result lies in the unit ball.
    pub fn normalized(&self) -> Result<Self, RidgeError> {
        let norm = self
            .lip_norm
            .ok_or_else(|| RidgeError::InvalidParameter("profile has no stored norm".into()))?;
        if norm.value <= 0.0 {
            return Ok(self.clone());
        }
        Ok(self.scaled(1.0 / norm.value))
    }

    /// Grid maximization of the Lipschitz norm on `density` equispaced points.
    /// The result is a lower bound on the true norm.
    pub fn estimate_lip_norm(&self, density: usize) -> Result<LipNorm, RidgeError> {
        let m = self.m();
        if m > self.derivatives.len() {
            return Err(RidgeError::MissingDerivatives { order: self.derivatives.len() + 1 });
        }
        let grid = linspace(self.lo, self.hi, density.max(2));
        let mut best = 0.0f64;
        for order in 0..=m {
            for &t in &grid {
                best = best.max(self.derivative(order, t)?.abs());
            }
        }
        let top: Vec<f64> = grid.iter().map(|&t| self.derivative(m, t)).collect::<Result<_, _>>()?;
        let h = hoelder_on_samples(&grid, &top, self.beta());
        Ok(LipNorm { value: best.max(h), kind: NormKind::LowerBound })
    }

    /// `g(t) = slope·t + intercept` on `[-1, 1]` with its exact norm.
    pub fn linear(slope: f64, intercept: f64, r: f64) -> Result<Self, RidgeError> {
        let s = Smoothness::new(r)?;
        let norm = linear_norm(slope, intercept, s);
        Ok(Self::new(-1.0, 1.0, r, move |t| slope * t + intercept)?
            .with_derivatives(
                (1..=s.m())
                    .map(|i| Arc::new(move |_t| if i == 1 { slope } else { 0.0 }) as ScalarFn)
                    .collect(),
            )
            .with_lip_norm(norm, NormKind::Exact))
    }

    /// `g(t) = amp·sin(omega·t + phase)` on `[-1, 1]` with an analytic upper
    /// bound on its norm.
    pub fn sine(amp: f64, omega: f64, phase: f64, r: f64) -> Result<Self, RidgeError> {
        let s = Smoothness::new(r)?;
        let derivatives = (1..=s.m())
            .map(|i| {
                let k = amp * omega.powi(i as i32);
                let shift = phase + i as f64 * std::f64::consts::FRAC_PI_2;
                Arc::new(move |t: f64| k * (omega * t + shift).sin()) as ScalarFn
            })
            .collect();
        let (a, w) = (amp.abs(), omega.abs());
        let mut norm = (0..=s.m()).map(|i| a * w.powi(i as i32)).fold(0.0, f64::max);
        let top = a * w.powi(s.m() as i32);
        norm = norm.max(hoelder_upper_bound(2.0 * top, top * w, s.beta(), 2.0));
        Ok(Self::new(-1.0, 1.0, r, move |t| amp * (omega * t + phase).sin())?
            .with_derivatives(derivatives)
            .with_lip_norm(norm, NormKind::UpperBound))
    }
}

impl Profile {
    /// `g(t) = Σ coeffs[k]·t^k` on `[-1, 1]`, with the norm bounded through
    /// coefficient sums.
    pub fn polynomial(coeffs: Vec<f64>, r: f64) -> Result<Self, RidgeError> {
        let s = Smoothness::new(r)?;
        let derive = |c: &[f64]| -> Vec<f64> { c.iter().enumerate().skip(1).map(|(k, &x)| k as f64 * x).collect() };
        let horner = |c: &[f64], t: f64| c.iter().rev().fold(0.0, |acc, &x| acc * t + x);
        let mut chain = vec![coeffs.clone()];
        for _ in 0..=s.m() {
            let next = derive(chain.last().expect("nonempty"));
            chain.push(next);
        }
        let bound = |c: &[f64]| c.iter().map(|x| x.abs()).sum::<f64>();
        let mut norm = chain[..=s.m()].iter().map(|c| bound(c)).fold(0.0, f64::max);
        norm = norm.max(hoelder_upper_bound(2.0 * bound(&chain[s.m()]), bound(&chain[s.m() + 1]), s.beta(), 2.0));
        let derivatives = chain[1..=s.m()]
            .iter()
            .map(|c| {
                let c = c.clone();
                Arc::new(move |t: f64| horner(&c, t)) as ScalarFn
            })
            .collect();
        Ok(Self::new(-1.0, 1.0, r, move |t| horner(&coeffs, t))?
            .with_derivatives(derivatives)
            .with_lip_norm(norm, NormKind::UpperBound))
    }
}

fn linear_norm(slope: f64, intercept: f64, s: Smoothness) -> f64 {
    let sup = slope.abs() + intercept.abs();
    match s.m() {
        0 => sup.max(hoelder_upper_bound(2.0 * slope.abs(), slope.abs(), s.beta(), 2.0)),
        _ => sup.max(slope.abs()),
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn hoelder_on_samples(grid: &[f64], vals: &[f64], beta: f64) -> f64 {
    let mut best = 0.0f64;
    for i in 0..grid.len() {
        for j in i + 1..grid.len() {
            let dist = (grid[i] - grid[j]).abs();
            if dist == 0.0 {
                continue;
            }
            let q = (vals[i] - vals[j]).abs() / (2.0 * dist.min(1.0).powf(beta));
            best = best.max(q);
        }
    }
    best
}

/// Maximum over distinct grid pairs of `|g(u) − g(v)| / (2·min{1, |u − v|}^β)`.
pub fn hoelder_constant_estimate<F>(g: F, beta: f64, grid: &[f64]) -> Result<f64, RidgeError>
where
    F: Fn(f64) -> f64,
{
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(RidgeError::InvalidParameter(format!("beta = {beta} outside (0, 1]")));
    }
    let first = grid.first().ok_or(RidgeError::DegenerateGrid)?;
    if grid.iter().all(|t| t == first) {
        return Err(RidgeError::DegenerateGrid);
    }
    let vals: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    Ok(hoelder_on_samples(grid, &vals, beta))
}

/// Upper bound on `|h|_β` over an interval of length `length` for any `h`
/// with `|h(u) − h(v)| ≤ min{oscillation, lipschitz·|u − v|}`.
pub fn hoelder_upper_bound(oscillation: f64, lipschitz: f64, beta: f64, length: f64) -> f64 {
    if oscillation <= 0.0 || lipschitz <= 0.0 || length <= 0.0 {
        return 0.0;
    }
    let near_end = length.min(1.0);
    let delta = (oscillation / lipschitz).min(near_end);
    let near = oscillation.min(lipschitz * delta) / (2.0 * delta.powf(beta));
    let far = if length > 1.0 { oscillation.min(lipschitz * length) / 2.0 } else { 0.0 };
    near.max(far)
}

/// Exact Lipschitz norm of `max{0, t − tau}^r` on `[-1, 1]`, for `tau ∈ [-1, 1)`.
pub fn truncated_power_norm(r: f64, tau: f64) -> f64 {
    let s = Smoothness::new(r).expect("r > 0");
    let span = 1.0 - tau;
    let mut coef = 1.0;
    let mut best = 0.0f64;
    for i in 0..=s.m() {
        best = best.max(coef * span.powf(r - i as f64));
        if i < s.m() {
            coef *= r - i as f64;
        }
    }
    best.max(coef * span.powf(s.beta()).max(1.0) / 2.0)
}

/// `t ↦ max{0, t − tau}^r` on `[-1, 1]` with analytic derivatives and norm.
pub fn truncated_power(r: f64, tau: f64) -> Result<Profile, RidgeError> {
    if !(tau >= -1.0 && tau < 1.0) {
        return Err(RidgeError::InvalidParameter(format!("threshold {tau} outside [-1, 1)")));
    }
    let s = Smoothness::new(r)?;
    let mut derivatives = Vec::with_capacity(s.m());
    let mut coef = 1.0;
    for i in 1..=s.m() {
        coef *= r - (i - 1) as f64;
        let k = coef;
        let e = r - i as f64;
        derivatives.push(Arc::new(move |t: f64| k * (t - tau).max(0.0).powf(e)) as ScalarFn);
    }
    Ok(Profile::new(-1.0, 1.0, r, move |t| (t - tau).max(0.0).powf(r))?
        .with_derivatives(derivatives)
        .with_lip_norm(truncated_power_norm(r, tau), NormKind::Exact))
}

/// The normalized fooling profile `max{0, t − λ/2}^r / ‖·‖_Lip(r)`.
#[derive(Debug, Clone)]
pub struct FoolingProfile {
    pub r: f64,
    pub lambda: f64,
    pub normalization: f64,
    profile: Profile,
}

impl FoolingProfile {
    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn evaluate(&self, t: f64) -> Result<f64, RidgeError> {
        self.profile.evaluate(t)
    }

    /// Value at `t = λ`, the sup norm of the paired fooling instance.
    pub fn peak(&self) -> f64 {
        self.profile.evaluate(self.lambda.min(1.0)).expect("lambda lies in the domain")
    }
}

pub fn truncated_power_profile(r: f64, lambda: f64) -> Result<FoolingProfile, RidgeError> {
    if !(lambda > 0.0 && lambda < 2.0) {
        return Err(RidgeError::InvalidParameter(format!("lambda = {lambda} outside (0, 2)")));
    }
    let raw = truncated_power(r, lambda / 2.0)?;
    let normalization = raw.lip_norm().expect("analytic norm").value;
    let profile = raw.scaled(1.0 / normalization).with_lip_norm(1.0, NormKind::Exact);
    Ok(FoolingProfile { r, lambda, normalization, profile })
}

/// `sign(0) = +1`.
pub fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn sign_vector(a: &[f64]) -> Vec<f64> {
    a.iter().map(|&x| sign(x)).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l1_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// `(Σ|a_i|^p)^{1/p}`; a quasi-norm for `p < 1`.
pub fn lp_norm(a: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return l1_norm(a);
    }
    a.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Class parameters `(p, S)`; `sparsity = None` is plain compressibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgeClass {
    pub p: f64,
    #[serde(rename = "S")]
    pub sparsity: Option<usize>,
}

impl RidgeClass {
    pub fn compressible(p: f64) -> Self {
        Self { p, sparsity: None }
    }

    pub fn sparse(p: f64, s: usize) -> Self {
        Self { p, sparsity: Some(s) }
    }

    /// `min{1, 4·S^{1−1/p}}`, or 0 without a sparsity level.
    pub fn l1_floor(&self) -> f64 {
        match self.sparsity {
            Some(s) => (4.0 * (s as f64).powf(1.0 - 1.0 / self.p)).min(1.0),
            None => 0.0,
        }
    }
}

const CLASS_TOL: f64 = 1e-12;

/// `f(x) = g(aᵀx)` on `[-1, 1]^d`.
#[derive(Debug, Clone)]
pub struct RidgeFunction {
    profile: Profile,
    a: Vec<f64>,
    class: RidgeClass,
    l1: f64,
}

impl RidgeFunction {
    pub fn new(profile: Profile, a: Vec<f64>, class: RidgeClass) -> Result<Self, RidgeError> {
        let d = a.len();
        if d == 0 {
            return Err(RidgeError::InvalidParameter("empty ridge vector".into()));
        }
        if !(class.p > 0.0 && class.p <= 1.0) {
            return Err(RidgeError::InvalidParameter(format!("p = {} outside (0, 1]", class.p)));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(RidgeError::InvalidParameter("non-finite ridge vector".into()));
        }
        let norm = lp_norm(&a, class.p);
        if norm > 1.0 + CLASS_TOL {
            return Err(RidgeError::InvalidParameter(format!("‖a‖_p = {norm} exceeds 1")));
        }
        let l1 = l1_norm(&a);
        if let Some(s) = class.sparsity {
            if s == 0 || s >= d {
                return Err(RidgeError::InvalidParameter(format!("S = {s} outside 1..{}", d - 1)));
            }
            if l1 < class.l1_floor() - CLASS_TOL {
                return Err(RidgeError::InvalidParameter(format!(
                    "‖a‖₁ = {l1} below the floor {}",
                    class.l1_floor()
                )));
            }
        }
        Self::unchecked(profile, a, class)
    }

    /// Skips class membership but still requires the profile to cover the
    /// range of `aᵀx`.
    pub fn unchecked(profile: Profile, a: Vec<f64>, class: RidgeClass) -> Result<Self, RidgeError> {
        let l1 = l1_norm(&a);
        // Normalising to a unit norm can overshoot by a few ulps.
        let slack = 1e-12 * l1.max(1.0);
        if !profile.covers(-l1 + slack, l1 - slack) {
            let (lo, hi) = profile.domain();
            return Err(RidgeError::InvalidParameter(format!(
                "profile interval [{lo}, {hi}] does not cover [-{l1}, {l1}]"
            )));
        }
        Ok(Self { profile, a, class, l1 })
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn class(&self) -> RidgeClass {
        self.class
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn direction(&self) -> Vec<f64> {
        if self.l1 == 0.0 {
            return self.a.clone();
        }
        self.a.iter().map(|x| x / self.l1).collect()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64, RidgeError> {
        if x.len() != self.a.len() {
            return Err(RidgeError::DimensionMismatch { expected: self.a.len(), got: x.len() });
        }
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| !(v.abs() <= 1.0)) {
            return Err(RidgeError::OutsideCube { index, value });
        }
        Ok(self.value_at(x))
    }

    /// Profile value at `aᵀx`; round-off beyond `±‖a‖₁` is clamped.
    pub(crate) fn value_at(&self, x: &[f64]) -> f64 {
        self.profile_at(dot(&self.a, x))
    }

    /// `g(t)` with `t` clamped to the range of `aᵀx` and the profile domain,
    /// absorbing round-off in `aᵀx`.
    pub(crate) fn profile_at(&self, t: f64) -> f64 {
        let (lo, hi) = self.profile.domain();
        (self.profile.value)(t.clamp(-self.l1, self.l1).clamp(lo, hi))
    }

    pub fn profile_value(&self, t: f64) -> Result<f64, RidgeError> {
        self.profile.evaluate(t)
    }

    pub fn negated(&self) -> Self {
        Self { profile: self.profile.negated(), a: self.a.clone(), class: self.class, l1: self.l1 }
    }
}
