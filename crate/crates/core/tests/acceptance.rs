//! Acceptance checks. Each criterion prints one PASS/FAIL line with its
//! measured value, tolerance and wall time.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ridge_recovery::adversary::{
    det_lower_bound_experiment, fooling_instance, fooling_vector, RecoverAlgorithm, ZeroModelAlgorithm,
};
use ridge_recovery::approx1d::{divided_difference, quasi_interpolant};
use ridge_recovery::harness::estimate::zonogon_estimate;
use ridge_recovery::harness::sweep::summarize;
use ridge_recovery::harness::{
    draw_instance, draw_profile, run_sweep, sup_error_estimate, EstimateOptions, ExperimentConfig, ProfileFamily,
};
use ridge_recovery::recovery::{best_s_term_error, hit_membership, select_parameters, ParameterRequest};
use ridge_recovery::ridge::{dot, l1_norm, lp_norm, sign, sign_vector, Profile};
use ridge_recovery::{recover, CountingOracle, Model, RidgeClass, RidgeFunction, Scenario, VertexMode};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: usize, name: &str, limit: Duration, body: impl FnOnce() -> Outcome, failures: &mut Vec<usize>) {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let pass = out.pass && in_time;
    println!(
        "{} criterion {id} ({name}): {} [{:.2}s, limit {:.0}s{}]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs_f64(),
        if in_time { "" } else { ", over time" }
    );
    if !pass {
        failures.push(id);
    }
}

fn spline_error(n: usize) -> f64 {
    let g = |t: f64| (3.0 * t).sin() / 3.0;
    let h = 1.0 / n as f64;
    let vals: Vec<f64> = (-(n as i64)..=n as i64).map(|i| g(i as f64 * h)).collect();
    let pp = quasi_interpolant(&vals, h, 3).unwrap();
    let total = 2 * n * 64;
    (0..=total)
        .map(|k| {
            let t = -1.0 + 2.0 * k as f64 / total as f64;
            (g(t) - pp.eval(t)).abs()
        })
        .fold(0.0, f64::max)
}

fn c1_spline_rate() -> Outcome {
    let errs: Vec<f64> = [8, 16, 32, 64].iter().map(|&n| spline_error(n)).collect();
    let rates: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let worst = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    Outcome { pass: worst >= 1.65, detail: format!("rates {rates:.3?}, min {worst:.3} >= 1.65") }
}

fn c2_divided_differences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = rng.gen_range(0..=4usize);
        let t: f64 = rng.gen_range(-1.0..=1.0);
        let h: f64 = rng.gen_range(0.1..=1.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let samples: Vec<f64> = (0..=m).map(|k| (t + k as f64 * h).powi(m as i32)).collect();
        let dd = divided_difference(&samples, m, h).unwrap();
        let fact = (1..=m).product::<usize>() as f64;
        worst = worst.max((dd - fact).abs() / fact);
    }
    Outcome { pass: worst <= 1e-10, detail: format!("max relative error {worst:.2e} <= 1e-10") }
}

fn c3_hit_gap() -> Outcome {
    let d = 32;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    let mut slack = f64::INFINITY;
    for k in 0..1000 {
        let p = [1.0 / 3.0, 0.5, 1.0][k % 3];
        let mut a: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0f64).powi(3)).collect();
        let norm = lp_norm(&a, p);
        a.iter_mut().for_each(|x| *x /= norm);
        let s = rng.gen_range(1..=d);
        let mut v: Vec<f64> = (0..d).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
        for i in ridge_recovery::recovery::top_indices(&a, s) {
            v[i] = sign(a[i]);
        }
        assert!(hit_membership(&v, &a, s));
        let gap = l1_norm(&a) - dot(&a, &v).abs();
        let bound = 2.0 * (s as f64).powf(1.0 - 1.0 / p);
        // Exact bound before the norm inequality: 2σ_s(a).
        let tight = 2.0 * best_s_term_error(&a, s);
        if gap < -1e-12 || gap > tight + 1e-12 || gap > bound + 1e-12 {
            violations += 1;
        }
        slack = slack.min(bound - gap);
    }
    Outcome { pass: violations == 0, detail: format!("{violations} violations in 1000, min slack {slack:.3e}") }
}

fn c4_direction() -> Outcome {
    let d = 8;
    let eps = 0.1;
    let cfg_c = ExperimentConfig {
        d,
        r: 2.0,
        p: 1.0,
        sparsity: 1,
        epsilon: eps,
        delta: 0.5,
        mode: VertexMode::Randomized,
        seeds: vec![0],
        budget_grid: vec![],
        profile_family: ProfileFamily::Linear,
        output_path: None,
        error_grid_resolution: 400,
        random_samples: 2000,
        c_r_spline: None,
        c_r: None,
        r0: None,
        lower_bound: None,
    }
    .with_constants();
    let mut violations = 0;
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..100u64 {
        // Slope at least 0.1 everywhere on [-1, 1].
        let c1 = rng.gen_range(0.3..=0.6);
        let c2 = rng.gen_range(-0.1..=0.1);
        let g = Profile::polynomial(vec![rng.gen_range(-0.2..=0.2), c1, c2], 2.0).unwrap().normalized().unwrap();
        let mut a: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let n1 = l1_norm(&a);
        a.iter_mut().for_each(|x| *x /= n1);
        let f = RidgeFunction::new(g, a.clone(), RidgeClass::compressible(1.0)).unwrap();
        let params = cfg_c.params(seed).unwrap();
        let mut o = CountingOracle::unlimited(&f);
        let res = recover(&mut o, &params).unwrap();
        let dir_err = match (&res.model, &res.diagnostics.chosen_v) {
            (Model::Ridge { direction, .. }, Some(v)) if res.scenario == Scenario::A => {
                let sg = sign(dot(&a, v));
                direction.iter().zip(&a).map(|(h, t)| (sg * h - t).abs()).sum::<f64>()
            }
            _ => f64::INFINITY,
        };
        worst = worst.max(dir_err);
        if !(dir_err <= eps / 3.0) {
            violations += 1;
        }
    }
    Outcome { pass: violations == 0, detail: format!("{violations} violations in 100, max error {worst:.3e} <= {:.4}", eps / 3.0) }
}

fn end_to_end_config() -> ExperimentConfig {
    ExperimentConfig {
        d: 20,
        r: 2.0,
        p: 0.5,
        sparsity: 1,
        epsilon: 0.1,
        delta: 0.05,
        mode: VertexMode::Randomized,
        seeds: (0..40).collect(),
        budget_grid: vec![],
        profile_family: ProfileFamily::Mixed,
        output_path: None,
        error_grid_resolution: 400,
        random_samples: 2000,
        c_r_spline: None,
        c_r: None,
        r0: None,
        lower_bound: None,
    }
    .with_constants()
}

struct EndToEnd {
    failures: usize,
    worst_error: f64,
    exact_mismatch: usize,
    over_nominal: usize,
    worst_case_ratio: f64,
    max_ratio: f64,
}

fn run_end_to_end() -> EndToEnd {
    let cfg = end_to_end_config();
    let mut out = EndToEnd { failures: 0, worst_error: 0.0, exact_mismatch: 0, over_nominal: 0, worst_case_ratio: 0.0, max_ratio: 0.0 };
    for &seed in &cfg.seeds {
        let truth = draw_instance(&cfg.profile_family, cfg.r, cfg.d, cfg.class(), seed).unwrap();
        let params = cfg.params(seed).unwrap();
        let mut o = CountingOracle::unlimited(&truth);
        let res = recover(&mut o, &params).unwrap();
        let opts = EstimateOptions { resolution: cfg.error_grid_resolution, random_samples: cfg.random_samples, seed };
        let err = sup_error_estimate(&truth, &res.model, &opts).unwrap().value;
        out.worst_error = out.worst_error.max(err);
        if err > cfg.epsilon {
            out.failures += 1;
        }
        let exact = params.exact_sample_count(res.diagnostics.scanned_vertices, res.scenario == Scenario::A);
        if res.samples_used as u128 != exact || o.samples_used() != res.samples_used {
            out.exact_mismatch += 1;
        }
        let nominal = params.nominal_sample_count() as f64;
        let ratio = res.samples_used as f64 / nominal;
        out.max_ratio = out.max_ratio.max(ratio);
        if ratio > 3.0 {
            out.over_nominal += 1;
        }
        let wc = params.worst_case_samples() as f64 / nominal;
        out.worst_case_ratio = out.worst_case_ratio.max(wc.max(1.0 / wc));
    }
    out
}

fn c7_lower_bound() -> Outcome {
    let (d, n, r, p) = (64, 100, 2.0, 1.0);
    let zero = ZeroModelAlgorithm { queries: n, point_seed: 7 };
    let req = ParameterRequest {
        r,
        p,
        sparsity: 1,
        d,
        epsilon: 0.1,
        delta: 0.5,
        mode: VertexMode::Randomized,
        c_r: end_to_end_config().recovery_constant(),
        c_r_spline: end_to_end_config().spline_constant(),
        seed: 7,
        r0: None,
    };
    let rec = RecoverAlgorithm { params: select_parameters(&req).unwrap() };
    let mut parts = Vec::new();
    let mut pass = true;
    for (label, rep) in [
        ("zero model", det_lower_bound_experiment(&zero, n, d, r, p, 7)),
        ("recover", det_lower_bound_experiment(&rec, n, d, r, p, 7)),
    ] {
        match rep {
            Ok(rep) => {
                // Both ±f* answer zero everywhere the algorithm looked, so
                // max(|f* − m|, |−f* − m|) ≥ |f*(x)| for its output m at any x.
                let inst = fooling_instance(&rep.instance, r).unwrap();
                let peak = inst.function.evaluate(&sign_vector(&rep.instance.a)).unwrap();
                let ok = rep.achieved_error >= 0.125 && peak >= 0.125 && rep.certified;
                pass &= ok;
                parts.push(format!("{label}: error {:.6} (bound {:.3}, |f*| {:.6})", rep.achieved_error, rep.bound, rep.fooling_sup_norm));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{label}: {e}"));
            }
        }
    }
    Outcome { pass, detail: parts.join("; ") + " >= 0.125" }
}

fn c8_fooling_tries() -> Outcome {
    let (d, s, n) = (64, 64, 100);
    let mut total = 0u64;
    for seed in 0..500u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9));
        let points: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
        total += fooling_vector(&points, d, s, 1.0, seed, None).unwrap().tries_used;
    }
    let mean = total as f64 / 500.0;
    Outcome { pass: mean <= 1.1, detail: format!("mean tries {mean:.3} <= 1.1") }
}

fn random_model(rng: &mut ChaCha8Rng) -> Model {
    if rng.gen_range(0..5) == 0 {
        return Model::Constant { value: rng.gen_range(-0.5..=0.5) };
    }
    let g = draw_profile(&ProfileFamily::Mixed, 2.0, rng).unwrap();
    let n = rng.gen_range(3..=12usize);
    let h = 1.0 / n as f64;
    let vals: Vec<f64> = (-(n as i64)..=n as i64).map(|i| g.evaluate(i as f64 * h).unwrap()).collect();
    let pp = quasi_interpolant(&vals, h, 3).unwrap();
    let mut dir = vec![rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)];
    let n1 = l1_norm(&dir);
    dir.iter_mut().for_each(|x| *x /= n1);
    Model::Ridge { profile: pp, direction: dir }
}

fn c9_zonogon() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = f64::INFINITY;
    for k in 0..50u64 {
        let truth = draw_instance(&ProfileFamily::Mixed, 2.0, 2, RidgeClass::compressible(1.0), 900 + k).unwrap();
        let model = random_model(&mut rng);
        let est = zonogon_estimate(&truth, &model, 400).unwrap().value;
        let mut brute = 0.0f64;
        for i in 0..400 {
            for j in 0..400 {
                let x = [-1.0 + 2.0 * i as f64 / 399.0, -1.0 + 2.0 * j as f64 / 399.0];
                brute = brute.max((truth.evaluate(&x).unwrap() - model.eval(&x)).abs());
            }
        }
        if brute > 0.0 {
            worst = worst.min(est / brute);
        }
    }
    Outcome { pass: worst >= 0.999, detail: format!("min ratio zonogon/brute {worst:.5} >= 0.999") }
}

fn c10_regime_shape() -> Outcome {
    let cfg = ExperimentConfig {
        d: 10,
        r: 2.0,
        p: 0.5,
        sparsity: 1,
        epsilon: 0.1,
        delta: 0.5,
        mode: VertexMode::Randomized,
        seeds: (0..200).collect(),
        budget_grid: (0..11).map(|k| 20usize << k).collect(),
        profile_family: ProfileFamily::TruncatedPower,
        output_path: None,
        error_grid_resolution: 200,
        random_samples: 500,
        c_r_spline: None,
        c_r: None,
        r0: None,
        lower_bound: None,
    };
    let rows = run_sweep(&cfg).unwrap();
    let summary = summarize(&rows, cfg.r, cfg.p);
    let env: Vec<(usize, f64)> = summary.envelope.iter().map(|e| (e.budget, e.max_error)).collect();
    let monotone = env.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12);
    let target = cfg.r * (1.0 / cfg.p - 1.0);
    let exponent = summary.logarithmic_exponent;
    let shape = exponent.is_some_and(|e| (e - target).abs() <= 0.5 * target);
    let regimes: Vec<&str> = summary.envelope.iter().map(|e| e.regime.as_str()).collect();
    Outcome {
        pass: monotone && shape,
        detail: format!(
            "envelope {env:.4?} regimes {regimes:?}; monotone {monotone}; exponent {exponent:?} within [{:.1}, {:.1}]",
            0.5 * target,
            1.5 * target
        ),
    }
}

fn main() {
    let mut failures = Vec::new();
    check(1, "spline rate", Duration::from_secs(1), c1_spline_rate, &mut failures);
    check(2, "divided differences", Duration::from_secs(1), c2_divided_differences, &mut failures);
    check(3, "HIT gap", Duration::from_secs(5), c3_hit_gap, &mut failures);
    check(4, "step-3 direction", Duration::from_secs(30), c4_direction, &mut failures);

    let mut e2e = None;
    check(
        5,
        "end-to-end recovery",
        Duration::from_secs(600),
        || {
            let run = e2e.insert(run_end_to_end());
            let frac = run.failures as f64 / 40.0;
            Outcome { pass: frac <= 0.125, detail: format!("failure fraction {frac:.3} <= 0.125, max error {:.3e}", run.worst_error) }
        },
        &mut failures,
    );
    let e2e = e2e.expect("criterion 5 ran");
    check(
        6,
        "sample accounting",
        Duration::from_secs(600),
        || Outcome {
            pass: e2e.exact_mismatch == 0 && e2e.over_nominal == 0 && e2e.worst_case_ratio <= 3.0,
            detail: format!(
                "per run: {} exact-count mismatches, {} runs above 3n' (max used/n' {:.3}); worst-case count vs n' factor {:.3} <= 3",
                e2e.exact_mismatch, e2e.over_nominal, e2e.max_ratio, e2e.worst_case_ratio
            ),
        },
        &mut failures,
    );
    check(7, "deterministic lower bound", Duration::from_secs(60), c7_lower_bound, &mut failures);
    check(8, "fooling-vector tries", Duration::from_secs(10), c8_fooling_tries, &mut failures);
    check(9, "zonogon estimator", Duration::from_secs(30), c9_zonogon, &mut failures);
    check(10, "regime shape", Duration::from_secs(1200), c10_regime_shape, &mut failures);
    if failures.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failures:?}");
        std::process::exit(1);
    }
}
