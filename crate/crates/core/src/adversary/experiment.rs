use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algorithms::SamplingAlgorithm;
use super::bounds::{lower_bound_value, randomized_lower_bound_value};
use super::fooling::{fooling_instance, fooling_vector, sign_pattern, FoolingVector};
use super::AdversaryError;
use crate::harness::estimate::{sup_error_estimate, EstimateOptions};
use crate::oracle::{same_points, CountingOracle, Query, Target, ZeroTarget};
use crate::recovery::Model;
use crate::ridge::RidgeFunction;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub algorithm: String,
    pub n: usize,
    pub d: usize,
    pub r: f64,
    pub p: f64,
    pub s: usize,
    /// `c_r (1/(8 ln 2n))^{r(1/p−1)}`.
    pub bound: f64,
    /// `‖f*‖∞`.
    pub fooling_sup_norm: f64,
    /// Largest estimated sup error over `±f*`.
    pub achieved_error: f64,
    pub witness: Vec<f64>,
    /// `achieved_error ≥ ‖f*‖∞ ≥ bound`.
    pub certified: bool,
    pub instance: FoolingVector,
    /// Ledgers on `0`, `+f*` and `−f*`.
    pub transcripts: Vec<Vec<Query>>,
}

/// Smallest `s ≥ 1` with `n < e^{s/8}`.
pub fn deterministic_sparsity(n: usize) -> usize {
    let mut s = 1;
    while (n as f64) >= (s as f64 / 8.0).exp() {
        s += 1;
    }
    s
}

fn run_once(alg: &dyn SamplingAlgorithm, target: &dyn Target, n: usize, seed: u64) -> (Model, Vec<Query>) {
    let mut oracle = CountingOracle::new(target, n);
    let model = alg.run(&mut oracle, seed);
    (model, oracle.into_ledger())
}

fn estimate_options(seed: u64) -> EstimateOptions {
    EstimateOptions { resolution: 201, random_samples: 256, seed }
}

/// Error of `model` against `f` and of `model_neg` against `−f`, with witnesses.
fn pm_error(f: &RidgeFunction, model: &Model, model_neg: &Model, seed: u64) -> Result<(f64, Vec<f64>), AdversaryError> {
    let plus = sup_error_estimate(f, model, &estimate_options(seed)).map_err(|e| AdversaryError::Estimate(e.to_string()))?;
    let minus = sup_error_estimate(&f.negated(), model_neg, &estimate_options(seed))
        .map_err(|e| AdversaryError::Estimate(e.to_string()))?;
    let best = if minus.value > plus.value { minus } else { plus };
    Ok((best.value, best.certificate_points.first().cloned().unwrap_or_default()))
}

/// Runs `alg` on the zero function, builds a fooling instance on its query
/// points and checks that the algorithm cannot tell `±f*` from zero.
pub fn det_lower_bound_experiment(
    alg: &dyn SamplingAlgorithm,
    n: usize,
    d: usize,
    r: f64,
    p: f64,
    seed: u64,
) -> Result<LowerBoundReport, AdversaryError> {
    if n == 0 || (n as f64 + 1.0) >= (d as f64 / 8.0).exp() {
        return Err(AdversaryError::Regime(format!("need 1 <= n and n + 1 < e^(d/8) (n = {n}, d = {d})")));
    }
    let zero = ZeroTarget(d);
    let (_, zero_ledger) = run_once(alg, &zero, n, seed);
    let points: Vec<Vec<f64>> = zero_ledger.iter().map(|q| q.point.clone()).collect();
    let s = deterministic_sparsity(n).min(d);
    let fv = fooling_vector(&points, d, s, p, seed, None)?;
    let inst = fooling_instance(&fv, r)?;
    let neg = inst.function.negated();
    let (model_plus, plus_ledger) = run_once(alg, &inst.function, n, seed);
    let (model_minus, minus_ledger) = run_once(alg, &neg, n, seed);
    for (sign, ledger) in [("+", &plus_ledger), ("-", &minus_ledger)] {
        if !same_points(&zero_ledger, ledger) || ledger.iter().any(|q| q.value != 0.0) {
            return Err(AdversaryError::LedgerDivergence { sign: sign.into() });
        }
    }
    let (achieved_error, witness) = pm_error(&inst.function, &model_plus, &model_minus, seed)?;
    let peak = inst.sup_norm();
    let bound = lower_bound_value(n, r, p);
    Ok(LowerBoundReport {
        algorithm: alg.name(),
        n,
        d,
        r,
        p,
        s,
        bound,
        fooling_sup_norm: peak,
        achieved_error,
        witness,
        certified: achieved_error >= peak && peak >= bound,
        instance: fv,
        transcripts: vec![zero_ledger, plus_ledger, minus_ledger],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomizedConfig {
    pub num_seeds: usize,
    pub delta: f64,
    pub base_seed: u64,
    /// Overrides the sparsity chosen from `n` and `δ`.
    pub sparsity: Option<usize>,
    pub max_candidates: usize,
}

impl Default for RandomizedConfig {
    fn default() -> Self {
        Self { num_seeds: 100, delta: 0.5, base_seed: 0, sparsity: None, max_candidates: 256 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomizedReport {
    pub algorithm: String,
    pub n: usize,
    pub d: usize,
    pub r: f64,
    pub p: f64,
    pub s: usize,
    pub delta: f64,
    pub num_seeds: usize,
    pub candidates_tried: usize,
    /// Fraction of seeds whose zero-input queries all lie in the dead zone.
    pub fooling_fraction: f64,
    pub instance: FoolingVector,
    pub fooling_sup_norm: f64,
    /// Larger of the mean errors on `+f*` and `−f*`.
    pub mean_error: f64,
    /// Error exceeded on at least a `δ` fraction of seeds.
    pub error_quantile: f64,
    pub fraction_above_half_peak: f64,
    /// `c_r' (1/(8 ln 4(n+1)))^{r(1/p−1)}`.
    pub bound: f64,
    pub certified: bool,
}

/// Smallest `s ≥ 1` with `n + 1 < (1 − δ) e^{s/8}`.
pub fn randomized_sparsity(n: usize, delta: f64) -> usize {
    let mut s = 1;
    while n as f64 + 1.0 >= (1.0 - delta) * (s as f64 / 8.0).exp() {
        s += 1;
    }
    s
}

/// Seed-pooled analogue of the randomized lower bound.
pub fn ran_lower_bound_experiment(
    alg: &dyn SamplingAlgorithm,
    n: usize,
    d: usize,
    r: f64,
    p: f64,
    cfg: &RandomizedConfig,
) -> Result<RandomizedReport, AdversaryError> {
    if (n as f64 + 1.0) >= (d as f64 / 8.0).exp() / 2.0 {
        return Err(AdversaryError::Regime(format!("need n + 1 < e^(d/8)/2 (n = {n}, d = {d})")));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) || cfg.num_seeds == 0 || cfg.max_candidates == 0 {
        return Err(AdversaryError::InvalidParameter("need 0 < delta < 1, seeds and candidates".into()));
    }
    let s = cfg.sparsity.unwrap_or_else(|| randomized_sparsity(n, cfg.delta)).clamp(1, d);
    let seeds: Vec<u64> = (0..cfg.num_seeds as u64).map(|i| cfg.base_seed.wrapping_add(i)).collect();
    let zero = ZeroTarget(d);
    let ledgers: Vec<Vec<Query>> = seeds.par_iter().map(|&sd| run_once(alg, &zero, n, sd).1).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed ^ 0x5eed_f001);
    let mut best: Option<(f64, FoolingVector)> = None;
    let mut tried = 0;
    for k in 0..cfg.max_candidates {
        tried = k + 1;
        let fv = FoolingVector { a: sign_pattern(d, s, p, &mut rng), s, p, tries_used: tried as u64 };
        let fooled = ledgers
            .iter()
            .filter(|l| fv.fools(l.iter().map(|q| q.point.as_slice())))
            .count();
        let frac = fooled as f64 / seeds.len() as f64;
        if best.as_ref().map_or(true, |(b, _)| frac > *b) {
            best = Some((frac, fv));
        }
        if frac == 1.0 {
            break;
        }
    }
    let (fooling_fraction, fv) = best.expect("at least one candidate");
    if fooling_fraction <= cfg.delta {
        return Err(AdversaryError::NoFoolingCandidate { best_fraction: fooling_fraction, delta: cfg.delta });
    }
    let inst = fooling_instance(&fv, r)?;
    let neg = inst.function.negated();
    let peak = inst.sup_norm();
    let errors: Vec<(f64, f64)> = seeds
        .par_iter()
        .map(|&sd| {
            let (mp, _) = run_once(alg, &inst.function, n, sd);
            let (mm, _) = run_once(alg, &neg, n, sd);
            let opts = estimate_options(sd);
            let ep = sup_error_estimate(&inst.function, &mp, &opts).map(|e| e.value);
            let em = sup_error_estimate(&neg, &mm, &opts).map(|e| e.value);
            match (ep, em) {
                (Ok(a), Ok(b)) => Ok((a, b)),
                (Err(e), _) | (_, Err(e)) => Err(AdversaryError::Estimate(e.to_string())),
            }
        })
        .collect::<Result<_, _>>()?;
    let count = errors.len() as f64;
    let mean_plus = errors.iter().map(|e| e.0).sum::<f64>() / count;
    let mean_minus = errors.iter().map(|e| e.1).sum::<f64>() / count;
    let mut worst: Vec<f64> = errors.iter().map(|e| e.0.max(e.1)).collect();
    worst.sort_by(|a, b| b.total_cmp(a));
    let idx = ((cfg.delta * count).ceil() as usize).clamp(1, worst.len()) - 1;
    let above = worst.iter().filter(|&&e| e >= peak / 2.0).count() as f64 / count;
    let mean_error = mean_plus.max(mean_minus);
    let bound = randomized_lower_bound_value(n, r, p);
    Ok(RandomizedReport {
        algorithm: alg.name(),
        n,
        d,
        r,
        p,
        s,
        delta: cfg.delta,
        num_seeds: cfg.num_seeds,
        candidates_tried: tried,
        fooling_fraction,
        instance: fv,
        fooling_sup_norm: peak,
        mean_error,
        error_quantile: worst[idx],
        fraction_above_half_peak: above,
        bound,
        certified: mean_error >= bound,
    })
}
