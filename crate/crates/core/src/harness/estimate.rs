//! Sup-norm error between a ridge function and a recovered model.
//!
//! For `f(x) = g(aᵀx)` and `f̂(x) = ĝ(âᵀx)` the error depends on `x` only
//! through `(u, w) = (aᵀx, âᵀx)`, whose range over the cube is a zonogon. The
//! feasible `w`-interval above each `u` is computed exactly by a greedy
//! continuous-knapsack pass, so only the `(u, w)` grid resolution is lost.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::oracle::Target;
use crate::recovery::Model;
use crate::ridge::{dot, sign, sign_vector, RidgeFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    ZonogonGrid,
    RandomSampling,
    Combined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    /// Equals `|f(x) − f̂(x)|` at `certificate_points[0]`.
    pub value: f64,
    pub method: EstimateMethod,
    /// Best witnesses, largest error first.
    pub certificate_points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    /// Grid points along `u` and along each feasible `w`-interval.
    pub resolution: usize,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self { resolution: 400, random_samples: 2000, seed: 0 }
    }
}

const TOP_K: usize = 8;

/// Maximizer of `cᵀx` over `{x ∈ [−1, 1]^d : aᵀx = u}` as a function of `u`.
///
/// Starting from `sign(a)` (free coordinates at `sign(c)`), coordinates are
/// flipped in ascending order of `c_i/a_i`; each flip lowers `aᵀx` by
/// `2|a_i|`, and at most one coordinate ends fractional.
pub struct KnapsackPath {
    start: Vec<f64>,
    order: Vec<usize>,
    a: Vec<f64>,
    top: f64,
}

impl KnapsackPath {
    pub fn new(a: &[f64], c: &[f64]) -> Self {
        let start: Vec<f64> = a
            .iter()
            .zip(c)
            .map(|(&ai, &ci)| if ai != 0.0 { sign(ai) } else { sign(ci) })
            .collect();
        let mut order: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0.0).collect();
        order.sort_by(|&i, &j| (c[i] / a[i]).total_cmp(&(c[j] / a[j])).then(i.cmp(&j)));
        Self { start, order, a: a.to_vec(), top: a.iter().map(|x| x.abs()).sum() }
    }

    /// Values of `aᵀx` at which the path changes its flipping coordinate.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut u = self.top;
        let mut out = vec![u];
        for &i in &self.order {
            u -= 2.0 * self.a[i].abs();
            out.push(u);
        }
        out
    }

    /// The maximizer at `u ∈ [−‖a‖₁, ‖a‖₁]`.
    pub fn point(&self, u: f64) -> Vec<f64> {
        let mut x = self.start.clone();
        let mut need = (self.top - u).max(0.0);
        for &i in &self.order {
            let cap = 2.0 * self.a[i].abs();
            if need <= 0.0 {
                break;
            }
            if need >= cap {
                x[i] = -x[i];
                need -= cap;
            } else {
                x[i] -= sign(self.a[i]) * need / self.a[i].abs();
                need = 0.0;
            }
        }
        x
    }
}

/// Exact `[w_min(u), w_max(u)]` for `w = cᵀx` subject to `aᵀx = u`, with the
/// minimizing and maximizing points.
pub fn w_interval(a: &[f64], c: &[f64], u: f64) -> ((f64, Vec<f64>), (f64, Vec<f64>)) {
    let neg: Vec<f64> = c.iter().map(|x| -x).collect();
    let x_max = KnapsackPath::new(a, c).point(u);
    let x_min = KnapsackPath::new(a, &neg).point(u);
    ((dot(c, &x_min), x_min), (dot(c, &x_max), x_max))
}

struct Candidates<'a> {
    truth: &'a RidgeFunction,
    model: &'a Model,
    best: Vec<(f64, Vec<f64>)>,
}

impl<'a> Candidates<'a> {
    fn new(truth: &'a RidgeFunction, model: &'a Model) -> Self {
        Self { truth, model, best: Vec::new() }
    }

    fn exact(&self, x: &[f64]) -> f64 {
        (self.truth.value(x) - self.model.eval(x)).abs()
    }

    /// Keeps the `TOP_K` largest by `score`; `x` is built lazily.
    fn offer<F: FnOnce() -> Vec<f64>>(&mut self, score: f64, x: F) {
        if !score.is_finite() {
            return;
        }
        if self.best.len() == TOP_K && score <= self.best[TOP_K - 1].0 {
            return;
        }
        let x: Vec<f64> = x().into_iter().map(|v| v.clamp(-1.0, 1.0)).collect();
        self.best.push((score, x));
        self.best.sort_by(|a, b| b.0.total_cmp(&a.0));
        self.best.truncate(TOP_K);
    }

    fn offer_point(&mut self, x: Vec<f64>) {
        let e = self.exact(&x);
        self.offer(e, || x);
    }

    /// Re-evaluates the kept candidates at their points.
    fn finish(self, method: EstimateMethod) -> ErrorEstimate {
        let mut rescored: Vec<(f64, Vec<f64>)> = self.best.iter().map(|(_, x)| (self.exact(x), x.clone())).collect();
        rescored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let value = rescored.first().map_or(0.0, |c| c.0);
        ErrorEstimate { value, method, certificate_points: rescored.into_iter().map(|c| c.1).collect() }
    }
}

fn check_dims(truth: &RidgeFunction, model: &Model) -> Result<(), HarnessError> {
    if let Some(dir) = model.direction() {
        if dir.len() != truth.dim() {
            return Err(HarnessError::DimensionMismatch { expected: truth.dim(), got: dir.len() });
        }
    }
    Ok(())
}

fn grid(lo: f64, hi: f64, n: usize, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let n = n.max(2);
    let mut g: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    g.extend(extra.into_iter().filter(|t| *t >= lo && *t <= hi));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Points per side of each local refinement window.
const REFINE_POINTS: usize = 16;
const REFINE_LEVELS: usize = 3;

/// Best `(error, u, w)` cells of a scan, refined by shrinking windows around
/// the leaders.
type Cell = (f64, f64, f64);

fn keep_top(cells: &mut Vec<Cell>, cell: Cell) {
    if !cell.0.is_finite() {
        return;
    }
    if cells.len() == TOP_K && cell.0 <= cells[TOP_K - 1].0 {
        return;
    }
    cells.push(cell);
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    cells.truncate(TOP_K);
}

fn zonogon(c: &mut Candidates<'_>, resolution: usize) {
    let truth = c.truth;
    let a = truth.a();
    let l1 = truth.l1();
    let n = resolution.max(2);
    let point_at = |u: f64| -> Vec<f64> {
        if l1 == 0.0 {
            vec![0.0; a.len()]
        } else {
            sign_vector(a).iter().map(|s| s * u / l1).collect()
        }
    };
    match c.model {
        Model::Constant { value } => {
            let value = *value;
            let err = |u: f64| (truth.profile_at(u) - value).abs();
            let mut cells = Vec::new();
            for u in grid(-l1, l1, n, []) {
                keep_top(&mut cells, (err(u), u, 0.0));
            }
            let mut du = 2.0 * l1 / (n - 1) as f64;
            for _ in 0..REFINE_LEVELS {
                let seeds = cells.clone();
                for &(_, u0, _) in &seeds {
                    for u in grid((u0 - du).max(-l1), (u0 + du).min(l1), 2 * REFINE_POINTS + 1, []) {
                        keep_top(&mut cells, (err(u), u, 0.0));
                    }
                }
                du /= REFINE_POINTS as f64;
            }
            for &(e, u, _) in &cells {
                c.offer(e, || point_at(u));
            }
        }
        Model::Ridge { profile, direction } => {
            let up = KnapsackPath::new(a, direction);
            let neg: Vec<f64> = direction.iter().map(|x| -x).collect();
            let down = KnapsackPath::new(a, &neg);
            let breaks: Vec<f64> = up.breakpoints().into_iter().chain(down.breakpoints()).collect();
            let knots: Vec<f64> = (-(profile.n as i64)..=profile.n as i64).map(|i| i as f64 * profile.h).collect();
            let w_range = |u: f64| (dot(direction, &down.point(u)), dot(direction, &up.point(u)));
            let mut cells = Vec::new();
            let scan = |cells: &mut Vec<Cell>, us: Vec<f64>, w_window: &dyn Fn(f64, f64) -> (f64, f64), w_points: usize| {
                for u in us {
                    let gu = truth.profile_at(u);
                    let (w_lo, w_hi) = w_range(u);
                    let w_hi = w_hi.max(w_lo);
                    let (lo, hi) = w_window(w_lo, w_hi);
                    let (lo, hi) = (lo.max(w_lo), hi.min(w_hi));
                    if lo > hi {
                        continue;
                    }
                    for w in grid(lo, hi, w_points, knots.iter().copied().chain([w_lo, w_hi])) {
                        keep_top(cells, ((gu - profile.eval(w)).abs(), u, w));
                    }
                }
            };
            scan(&mut cells, grid(-l1, l1, n, breaks.iter().copied()), &|lo, hi| (lo, hi), n);
            let mut du = 2.0 * l1 / (n - 1) as f64;
            let mut dw = 2.0 / (n - 1) as f64;
            for _ in 0..REFINE_LEVELS {
                let seeds = cells.clone();
                for &(_, u0, w0) in &seeds {
                    let us = grid((u0 - du).max(-l1), (u0 + du).min(l1), 2 * REFINE_POINTS + 1, [u0]);
                    scan(&mut cells, us, &|_, _| (w0 - dw, w0 + dw), 2 * REFINE_POINTS + 1);
                }
                du /= REFINE_POINTS as f64;
                dw /= REFINE_POINTS as f64;
            }
            for &(e, u, w) in &cells {
                c.offer(e, || {
                    let (x_min, x_max) = (down.point(u), up.point(u));
                    let (w_lo, w_hi) = (dot(direction, &x_min), dot(direction, &x_max));
                    let span = w_hi - w_lo;
                    let lam = if span > 0.0 { ((w - w_lo) / span).clamp(0.0, 1.0) } else { 0.0 };
                    x_min.iter().zip(&x_max).map(|(p, q)| (1.0 - lam) * p + lam * q).collect()
                });
            }
        }
    }
}

fn sampling(c: &mut Candidates<'_>, opts: &EstimateOptions) {
    let d = c.truth.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for k in 0..opts.random_samples {
        let x: Vec<f64> = if k % 2 == 0 {
            (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()
        } else {
            (0..d).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect()
        };
        c.offer_point(x);
    }
    let mut dirs = vec![sign_vector(c.truth.a())];
    if let Some(dir) = c.model.direction() {
        dirs.push(sign_vector(dir));
    }
    for v in dirs {
        for t in grid(-1.0, 1.0, opts.resolution, []) {
            c.offer_point(v.iter().map(|s| s * t).collect());
        }
    }
}

/// Zonogon grid search only.
pub fn zonogon_estimate(truth: &RidgeFunction, model: &Model, resolution: usize) -> Result<ErrorEstimate, HarnessError> {
    check_dims(truth, model)?;
    let mut c = Candidates::new(truth, model);
    zonogon(&mut c, resolution);
    Ok(c.finish(EstimateMethod::ZonogonGrid))
}

/// Random cube points and line probes only.
pub fn sampling_estimate(truth: &RidgeFunction, model: &Model, opts: &EstimateOptions) -> Result<ErrorEstimate, HarnessError> {
    check_dims(truth, model)?;
    let mut c = Candidates::new(truth, model);
    sampling(&mut c, opts);
    Ok(c.finish(EstimateMethod::RandomSampling))
}

/// Zonogon grid search augmented by random sampling and line probes.
pub fn sup_error_estimate(truth: &RidgeFunction, model: &Model, opts: &EstimateOptions) -> Result<ErrorEstimate, HarnessError> {
    check_dims(truth, model)?;
    let mut c = Candidates::new(truth, model);
    zonogon(&mut c, opts.resolution);
    sampling(&mut c, opts);
    Ok(c.finish(EstimateMethod::Combined))
}
