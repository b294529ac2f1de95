//! Error-versus-budget sweeps.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::estimate::{sup_error_estimate, EstimateOptions};
use super::instances::draw_instance;
use super::HarnessError;
use crate::oracle::CountingOracle;
use crate::recovery::{recover, select_parameters, Model, RecoveryParams, Scenario};

/// Largest accuracy tried when no accuracy fits the budget.
pub const EPSILON_MAX: f64 = 0.99;
const EPSILON_RATIO: f64 = 0.98;
const EPSILON_MIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub budget: usize,
    pub seed: u64,
    pub scenario: String,
    pub samples_used: usize,
    pub error: f64,
    pub regime: String,
}

/// `c_{p,S} = S^{1−1/p}/4`.
pub fn regime_constant(p: f64, sparsity: usize) -> f64 {
    (sparsity as f64).powf(1.0 - 1.0 / p) / 4.0
}

/// Case split of the three-regime upper bound: `n < 4d`, up to
/// `c_{p,S} 2^d d^{1/p−1}`, and beyond.
pub fn regime_label(n: usize, d: usize, p: f64, sparsity: usize) -> &'static str {
    let upper = regime_constant(p, sparsity) * 2f64.powi(d as i32) * (d as f64).powf(1.0 / p - 1.0);
    if n < 4 * d {
        "trivial"
    } else if (n as f64) <= upper {
        "logarithmic"
    } else {
        "polynomial"
    }
}

/// Smallest accuracy on the grid `0.99·0.98^k` whose worst-case sample count
/// fits `budget`.
pub fn budget_epsilon(cfg: &ExperimentConfig, budget: usize) -> Option<f64> {
    let mut best = None;
    let mut eps = EPSILON_MAX;
    while eps >= EPSILON_MIN {
        match select_parameters(&cfg.request(eps, 0)) {
            Ok(p) if p.worst_case_samples() <= budget as u128 => best = Some(eps),
            _ => break,
        }
        eps *= EPSILON_RATIO;
    }
    best
}

fn estimate(cfg: &ExperimentConfig, truth: &crate::ridge::RidgeFunction, model: &Model, seed: u64) -> Result<f64, HarnessError> {
    let opts = EstimateOptions { resolution: cfg.error_grid_resolution, random_samples: cfg.random_samples, seed };
    Ok(sup_error_estimate(truth, model, &opts)?.value)
}

/// Parameters a sweep row at `budget` runs with.
pub fn row_params(cfg: &ExperimentConfig, budget: usize, seed: u64) -> Result<RecoveryParams, HarnessError> {
    let eps = budget_epsilon(cfg, budget).unwrap_or(EPSILON_MAX);
    Ok(select_parameters(&cfg.request(eps, seed))?)
}

/// One row, reproducible from `(cfg, budget, seed)` alone.
pub fn sweep_row(cfg: &ExperimentConfig, budget: usize, seed: u64) -> Result<SweepRow, HarnessError> {
    let truth = draw_instance(&cfg.profile_family, cfg.r, cfg.d, cfg.class(), seed)?;
    let params = row_params(cfg, budget, seed)?;
    let mut oracle = CountingOracle::new(&truth, budget);
    let outcome = recover(&mut oracle, &params);
    let samples_used = oracle.samples_used();
    let (scenario, model) = match outcome {
        Ok(res) => (if res.scenario == Scenario::A { "A" } else { "B" }, res.model),
        Err(e) if e.is_budget_exhausted() => ("budget_exhausted", Model::Constant { value: 0.0 }),
        Err(_) => ("failed", Model::Constant { value: 0.0 }),
    };
    Ok(SweepRow {
        budget,
        seed,
        scenario: scenario.into(),
        samples_used,
        error: estimate(cfg, &truth, &model, seed)?,
        regime: regime_label(budget, cfg.d, cfg.p, cfg.sparsity).into(),
    })
}

/// All `(budget, seed)` rows in grid order; rows run in parallel.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>, HarnessError> {
    cfg.validate()?;
    let cfg = cfg.clone().with_constants();
    let jobs: Vec<(usize, u64)> = cfg
        .budget_grid
        .iter()
        .flat_map(|&b| cfg.seeds.iter().map(move |&s| (b, s)))
        .collect();
    jobs.par_iter().map(|&(b, s)| sweep_row(&cfg, b, s)).collect()
}

pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| HarnessError::Io(e.to_string()))?;
    if rows.is_empty() {
        w.write_record(["budget", "seed", "scenario", "samples_used", "error", "regime"])
            .map_err(|e| HarnessError::Io(e.to_string()))?;
    }
    for row in rows {
        w.serialize(row).map_err(|e| HarnessError::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| HarnessError::Io(e.to_string()))
}

pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::Io(e.to_string()))?;
    r.deserialize().map(|row| row.map_err(|e| HarnessError::Io(e.to_string()))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub budget: usize,
    pub max_error: f64,
    pub regime: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub envelope: Vec<EnvelopePoint>,
    /// Least-squares decay exponent of the envelope against `ln n` in the
    /// logarithmic regime.
    pub logarithmic_exponent: Option<f64>,
    /// `max err·(ln n)^{r(1/p−1)}` over logarithmic-regime envelope points.
    pub fitted_constant: Option<f64>,
}

/// Largest error over seeds per budget, in budget order.
pub fn envelope(rows: &[SweepRow]) -> Vec<EnvelopePoint> {
    let mut budgets: Vec<usize> = rows.iter().map(|r| r.budget).collect();
    budgets.sort_unstable();
    budgets.dedup();
    budgets
        .into_iter()
        .map(|b| {
            let sel = rows.iter().filter(|r| r.budget == b);
            EnvelopePoint {
                budget: b,
                max_error: sel.clone().map(|r| r.error).fold(0.0, f64::max),
                regime: sel.map(|r| r.regime.clone()).next().unwrap_or_default(),
            }
        })
        .collect()
}

/// Slope of `ln y` against `ln x` by least squares.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn summarize(rows: &[SweepRow], r: f64, p: f64) -> SweepSummary {
    let env = envelope(rows);
    let exponent = r * (1.0 / p - 1.0);
    let mid: Vec<&EnvelopePoint> = env.iter().filter(|e| e.regime == "logarithmic").collect();
    let pts: Vec<(f64, f64)> = mid.iter().map(|e| ((e.budget as f64).ln(), e.max_error)).collect();
    let fitted = mid
        .iter()
        .map(|e| e.max_error * (e.budget as f64).ln().powf(exponent))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    SweepSummary { envelope: env, logarithmic_exponent: log_log_slope(&pts).map(|s| -s), fitted_constant: fitted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::instances::ProfileFamily;
    use crate::recovery::VertexMode;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig {
            d: 4,
            r: 2.0,
            p: 1.0,
            sparsity: 1,
            epsilon: 0.1,
            delta: 0.5,
            mode: VertexMode::Exhaustive,
            seeds: vec![1, 2, 3],
            budget_grid: vec![5, 200, 2000],
            profile_family: ProfileFamily::Linear,
            output_path: None,
            error_grid_resolution: 100,
            random_samples: 100,
            c_r_spline: Some(0.05),
            c_r: None,
            r0: None,
            lower_bound: None,
        }
    }

    #[test]
    fn regime_boundaries() {
        assert_eq!(regime_label(39, 10, 0.5, 1), "trivial");
        assert_eq!(regime_label(40, 10, 0.5, 1), "logarithmic");
        assert_eq!(regime_label(2560, 10, 0.5, 1), "logarithmic");
        assert_eq!(regime_label(2561, 10, 0.5, 1), "polynomial");
    }

    #[test]
    fn tiny_budget_is_exhausted() {
        let rows = run_sweep(&cfg()).unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows.iter().filter(|r| r.budget == 5) {
            assert_eq!(row.scenario, "budget_exhausted");
            assert!(row.error <= 1.0);
            assert_eq!(row.samples_used, 5);
        }
        for row in rows.iter().filter(|r| r.budget == 2000) {
            assert_eq!(row.scenario, "A");
            assert!(row.error <= 0.1, "{row:?}");
        }
    }

    #[test]
    fn rows_are_reproducible_and_csv_round_trips() {
        let c = cfg().with_constants();
        let rows = run_sweep(&c).unwrap();
        assert_eq!(sweep_row(&c, 200, 2).unwrap(), rows[4]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        write_csv(&path, &rows).unwrap();
        assert_eq!(read_csv(&path).unwrap(), rows);
        let header = std::fs::read_to_string(&path).unwrap();
        assert!(header.starts_with("budget,seed,scenario,samples_used,error,regime\n"));
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 3.0 * (k as f64).powf(-2.0))).collect();
        assert!((log_log_slope(&pts).unwrap() + 2.0).abs() < 1e-12);
    }
}
