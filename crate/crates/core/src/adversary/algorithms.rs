use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::CountingOracle;
use crate::recovery::{recover, Model, RecoveryParams};

/// A black-box sampler: it may only see the target through `oracle`.
pub trait SamplingAlgorithm: Sync {
    fn name(&self) -> String;

    /// Deterministic adapters ignore `seed`.
    fn run(&self, oracle: &mut CountingOracle<'_>, seed: u64) -> Model;
}

fn midrange(oracle: &CountingOracle<'_>) -> f64 {
    let vals = oracle.ledger().iter().map(|q| q.value);
    let lo = vals.clone().fold(f64::INFINITY, f64::min);
    let hi = vals.fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        0.5 * (lo + hi)
    } else {
        0.0
    }
}

fn cube_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Queries `queries` fixed pseudo-random points, then returns the zero model.
#[derive(Debug, Clone, Copy)]
pub struct ZeroModelAlgorithm {
    pub queries: usize,
    pub point_seed: u64,
}

impl SamplingAlgorithm for ZeroModelAlgorithm {
    fn name(&self) -> String {
        "zero_model".into()
    }

    fn run(&self, oracle: &mut CountingOracle<'_>, _seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(self.point_seed);
        for _ in 0..self.queries {
            let x = cube_point(&mut rng, oracle.dim());
            if oracle.query(&x).is_err() {
                break;
            }
        }
        Model::Constant { value: 0.0 }
    }
}

/// The recovery procedure; any error, including an exhausted budget,
/// falls back to the midrange of the values seen so far.
#[derive(Debug, Clone, Copy)]
pub struct RecoverAlgorithm {
    pub params: RecoveryParams,
}

impl SamplingAlgorithm for RecoverAlgorithm {
    fn name(&self) -> String {
        format!("recover_{}", self.params.mode)
    }

    fn run(&self, oracle: &mut CountingOracle<'_>, _seed: u64) -> Model {
        match recover(oracle, &self.params) {
            Ok(res) => res.model,
            Err(_) => Model::Constant { value: midrange(oracle) },
        }
    }
}

/// The recovery procedure with its vertex seed taken from the run seed.
#[derive(Debug, Clone, Copy)]
pub struct SeededRecoverAlgorithm {
    pub params: RecoveryParams,
}

impl SamplingAlgorithm for SeededRecoverAlgorithm {
    fn name(&self) -> String {
        format!("seeded_recover_{}", self.params.mode)
    }

    fn run(&self, oracle: &mut CountingOracle<'_>, seed: u64) -> Model {
        let params = RecoveryParams { seed, ..self.params };
        RecoverAlgorithm { params }.run(oracle, seed)
    }
}

/// `queries` uniform points drawn from the run seed; returns the sample mean.
#[derive(Debug, Clone, Copy)]
pub struct UniformRandomAlgorithm {
    pub queries: usize,
}

impl SamplingAlgorithm for UniformRandomAlgorithm {
    fn name(&self) -> String {
        "uniform_random".into()
    }

    fn run(&self, oracle: &mut CountingOracle<'_>, seed: u64) -> Model {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sum = 0.0;
        let mut count = 0usize;
        for _ in 0..self.queries {
            match oracle.query(&cube_point(&mut rng, oracle.dim())) {
                Ok(v) => {
                    sum += v;
                    count += 1;
                }
                Err(_) => break,
            }
        }
        Model::Constant { value: if count > 0 { sum / count as f64 } else { 0.0 } }
    }
}
