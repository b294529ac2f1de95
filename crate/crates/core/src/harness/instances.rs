//! Random test instances inside the unit ball of the ridge class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::ridge::{lp_norm, truncated_power, Profile, RidgeClass, RidgeFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileFamily {
    Linear,
    Sine,
    TruncatedPower,
    /// Uniform choice among the built-in families per instance.
    Mixed,
    /// A named profile: `quadratic` or `cubic`.
    Custom(String),
}

fn custom(name: &str, r: f64) -> Result<Profile, HarnessError> {
    let p = match name {
        "quadratic" => Profile::polynomial(vec![0.0, 0.0, 1.0], r),
        "cubic" => Profile::polynomial(vec![0.0, -0.5, 0.0, 1.0], r),
        other => return Err(HarnessError::Config(format!("unknown profile `{other}`"))),
    };
    p.map_err(HarnessError::Ridge)
}

fn unit_ball(p: Profile, rng: &mut ChaCha8Rng) -> Result<Profile, HarnessError> {
    let scale = rng.gen_range(0.5..=1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
    Ok(p.normalized().map_err(HarnessError::Ridge)?.scaled(scale))
}

/// A profile of the family with Lipschitz norm at most 1.
pub fn draw_profile(family: &ProfileFamily, r: f64, rng: &mut ChaCha8Rng) -> Result<Profile, HarnessError> {
    let raw = match family {
        ProfileFamily::Linear => Profile::linear(rng.gen_range(0.3..=1.0), rng.gen_range(-0.3..=0.3), r)?,
        ProfileFamily::Sine => Profile::sine(
            1.0,
            rng.gen_range(1.0..=4.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
            r,
        )?,
        ProfileFamily::TruncatedPower => truncated_power(r, rng.gen_range(-0.6..=0.4))?,
        ProfileFamily::Custom(name) => custom(name, r)?,
        ProfileFamily::Mixed => {
            let pick = match rng.gen_range(0..4) {
                0 => ProfileFamily::Linear,
                1 => ProfileFamily::Sine,
                2 => ProfileFamily::TruncatedPower,
                _ => ProfileFamily::Custom("cubic".into()),
            };
            return draw_profile(&pick, r, rng);
        }
    };
    unit_ball(raw, rng)
}

/// A ridge vector in the class: `‖a‖_p = 1`, and above the ℓ1 floor when a
/// sparsity level is set.
pub fn draw_ridge_vector(d: usize, class: RidgeClass, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let one_sparse = |rng: &mut ChaCha8Rng| {
        let mut a = vec![0.0; d];
        a[rng.gen_range(0..d)] = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        a
    };
    let floor = class.l1_floor();
    // For p < 1, ‖a‖₁ = ‖a‖_p = 1 only for 1-sparse vectors.
    if class.p < 1.0 && floor >= 1.0 {
        return one_sparse(rng);
    }
    for _ in 0..1000 {
        let mut a: Vec<f64> = (0..d)
            .map(|_| {
                let m: f64 = rng.gen_range(0.0..1.0f64).powi(4);
                if rng.gen::<bool>() {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let norm = lp_norm(&a, class.p);
        if norm == 0.0 {
            continue;
        }
        a.iter_mut().for_each(|x| *x /= norm);
        if crate::ridge::l1_norm(&a) >= floor {
            return a;
        }
    }
    one_sparse(rng)
}

/// Instance for `seed`: the same seed always yields the same function.
pub fn draw_instance(family: &ProfileFamily, r: f64, d: usize, class: RidgeClass, seed: u64) -> Result<RidgeFunction, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a57_a9ce);
    let g = draw_profile(family, r, &mut rng)?;
    let a = draw_ridge_vector(d, class, &mut rng);
    Ok(RidgeFunction::new(g, a, class)?)
}
