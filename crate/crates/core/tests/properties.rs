use proptest::prelude::*;

use ridge_recovery::adversary::{fooling_instance, fooling_vector};
use ridge_recovery::approx1d::{divided_difference, quasi_interpolant, TaylorExtrapolant};
use ridge_recovery::harness::estimate::{w_interval, KnapsackPath};
use ridge_recovery::harness::{draw_instance, sup_error_estimate, EstimateOptions, ProfileFamily};
use ridge_recovery::oracle::{FnTarget, Target};
use ridge_recovery::recovery::{
    best_s_term_error, build_vertex_set, hit_membership, select_parameters, top_indices, ParameterRequest,
};
use ridge_recovery::ridge::{dot, l1_norm, lp_norm, sign, truncated_power};
use ridge_recovery::{recover, CountingOracle, OracleError, RidgeClass, Scenario, VertexMode};

fn poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn vector(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d)
}

fn request(d: usize, epsilon: f64, mode: VertexMode, seed: u64) -> ParameterRequest {
    ParameterRequest {
        r: 2.0,
        p: 1.0,
        sparsity: 1,
        d,
        epsilon,
        delta: 0.5,
        mode,
        c_r: 4.2,
        c_r_spline: 0.05,
        seed,
        r0: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_never_exceeds_budget(budget in 0usize..20, points in prop::collection::vec(vector(3), 0..30)) {
        let t = FnTarget::new(3, |x: &[f64]| x.iter().sum());
        let mut o = CountingOracle::new(&t, budget);
        for (k, x) in points.iter().enumerate() {
            let res = o.query(x);
            if k < budget {
                prop_assert_eq!(res, Ok(x.iter().sum::<f64>()));
            } else {
                prop_assert_eq!(res, Err(OracleError::BudgetExhausted { budget }));
            }
        }
        prop_assert_eq!(o.samples_used(), points.len().min(budget));
        prop_assert_eq!(o.ledger().len(), o.samples_used());
        prop_assert!(o.replay_matches());
    }

    #[test]
    fn oracle_rejects_points_off_the_cube(x in vector(4), i in 0usize..4, over in 1e-9f64..10.0) {
        let t = FnTarget::new(4, |_x: &[f64]| 0.0);
        let mut o = CountingOracle::unlimited(&t);
        let mut y = x.clone();
        y[i] = 1.0 + over;
        let rejected = matches!(o.query(&y), Err(OracleError::DomainViolation { .. }));
        prop_assert!(rejected);
        prop_assert_eq!(o.samples_used(), 0);
    }

    #[test]
    fn divided_difference_of_degree_m_polynomial(
        m in 0usize..5,
        lead in 0.5f64..2.0,
        lower in prop::collection::vec(-1.0f64..1.0, 5),
        t in -1.0f64..1.0,
        h in 0.05f64..0.5,
        flip in any::<bool>(),
    ) {
        let h = if flip { -h } else { h };
        let mut coeffs = lower[..m].to_vec();
        coeffs.push(lead);
        let samples: Vec<f64> = (0..=m).map(|k| poly(&coeffs, t + k as f64 * h)).collect();
        let dd = divided_difference(&samples, m, h).unwrap();
        let expect = lead * (1..=m).product::<usize>() as f64;
        prop_assert!((dd - expect).abs() <= 1e-7 * expect.max(1.0), "{} vs {}", dd, expect);
    }

    #[test]
    fn taylor_extrapolation_is_exact_on_polynomials(
        m in 0usize..4,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..5),
        t0 in -1.0f64..1.0,
        step in 0.1f64..0.4,
        t1 in -1.0f64..1.0,
    ) {
        let coeffs = &coeffs[..coeffs.len().min(m + 1)];
        let samples: Vec<f64> = (0..=m).map(|j| poly(coeffs, t0 + j as f64 * step)).collect();
        let ext = TaylorExtrapolant::from_one_sided(t0, &samples, m, step).unwrap();
        // One-sided differences are exact only through the linear term.
        if coeffs.len() <= 2 {
            prop_assert!((ext.evaluate(t1) - poly(coeffs, t1)).abs() < 1e-9);
        }
        prop_assert!((ext.evaluate(t0) - poly(coeffs, t0)).abs() < 1e-12);
    }

    #[test]
    fn quasi_interpolant_reproduces_low_degree_polynomials(
        r0 in 2usize..5,
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..5),
        n in 5usize..20,
        t in -1.0f64..1.0,
    ) {
        let coeffs = &coeffs[..coeffs.len().min(r0)];
        let h = 1.0 / n as f64;
        let vals: Vec<f64> = (-(n as i64)..=n as i64).map(|i| poly(coeffs, i as f64 * h)).collect();
        let pp = quasi_interpolant(&vals, h, r0).unwrap();
        prop_assert!((pp.eval(t) - poly(coeffs, t)).abs() < 1e-9);
    }

    #[test]
    fn quasi_interpolant_matches_its_knots(vals in prop::collection::vec(-1.0f64..1.0, 13), r0 in 2usize..5) {
        let pp = quasi_interpolant(&vals, 1.0 / 6.0, r0).unwrap();
        for (i, v) in vals.iter().enumerate() {
            let t = (i as f64 - 6.0) / 6.0;
            prop_assert!((pp.eval(t) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn hit_gap_bound(raw in vector(16), s in 1usize..=16, p_idx in 0usize..3, signs in prop::collection::vec(any::<bool>(), 16)) {
        let p = [1.0 / 3.0, 0.5, 1.0][p_idx];
        let norm = lp_norm(&raw, p);
        prop_assume!(norm > 0.0);
        let a: Vec<f64> = raw.iter().map(|x| x / norm).collect();
        let mut v: Vec<f64> = signs.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
        for i in top_indices(&a, s) {
            v[i] = sign(a[i]);
        }
        prop_assert!(hit_membership(&v, &a, s));
        let gap = l1_norm(&a) - dot(&a, &v).abs();
        prop_assert!(gap >= -1e-12);
        prop_assert!(gap <= 2.0 * best_s_term_error(&a, s) + 1e-12);
        prop_assert!(best_s_term_error(&a, s) <= (s as f64).powf(1.0 - 1.0 / p) + 1e-12);
    }

    #[test]
    fn knapsack_points_are_feasible_and_extreme(a in vector(5), c in vector(5), y in vector(5)) {
        prop_assume!(l1_norm(&a) > 1e-3);
        let u = dot(&a, &y);
        let ((lo, x_lo), (hi, x_hi)) = w_interval(&a, &c, u);
        for x in [&x_lo, &x_hi] {
            prop_assert!(x.iter().all(|v| v.abs() <= 1.0 + 1e-12));
            prop_assert!((dot(&a, x) - u).abs() < 1e-9);
        }
        let w = dot(&c, &y);
        prop_assert!(lo <= w + 1e-9 && w <= hi + 1e-9);
        let path = KnapsackPath::new(&a, &c);
        prop_assert!(path.breakpoints().windows(2).all(|b| b[1] <= b[0]));
    }

    #[test]
    fn fooling_vectors_fool_and_have_the_right_norms(
        points in prop::collection::vec(vector(24), 0..10),
        s in 16usize..=24,
        p_idx in 0usize..3,
        seed in any::<u64>(),
    ) {
        let p = [1.0 / 3.0, 0.5, 1.0][p_idx];
        if let Ok(fv) = fooling_vector(&points, 24, s, p, seed, Some(10_000)) {
            prop_assert!(fv.fools(points.iter().map(|z| z.as_slice())));
            prop_assert!((lp_norm(&fv.a, p) - 1.0).abs() < 1e-9);
            prop_assert!((fv.lambda() - (s as f64).powf(1.0 - 1.0 / p)).abs() < 1e-9);
            let inst = fooling_instance(&fv, 2.0).unwrap();
            for z in &points {
                prop_assert_eq!(inst.function.value(z), 0.0);
            }
        }
    }

    #[test]
    fn truncated_powers_stay_in_the_unit_ball(tau in -0.9f64..0.9, r in 1.2f64..3.5) {
        let g = truncated_power(r, tau).unwrap().normalized().unwrap();
        let est = g.estimate_lip_norm(257).unwrap();
        prop_assert!(est.value <= 1.0 + 1e-6, "{}", est.value);
    }

    #[test]
    fn vertex_sets_are_sign_vectors(d in 1usize..12, n_v in 1u128..200, seed in any::<u64>()) {
        let vs = build_vertex_set(d, n_v, seed).unwrap();
        prop_assert_eq!(vs.len(), n_v.min(1u128 << d));
        let all = vs.to_vec();
        prop_assert_eq!(all.len() as u128, vs.len());
        prop_assert!(all.iter().all(|v| v.len() == d && v.iter().all(|x| *x == 1.0 || *x == -1.0)));
        prop_assert_eq!(build_vertex_set(d, n_v, seed).unwrap().to_vec(), all);
    }

    #[test]
    fn finer_accuracy_never_shrinks_the_grid(e1 in 0.01f64..0.9, ratio in 0.1f64..1.0) {
        let coarse = select_parameters(&request(6, e1, VertexMode::Randomized, 0)).unwrap();
        let fine = select_parameters(&request(6, e1 * ratio, VertexMode::Randomized, 0)).unwrap();
        prop_assert!(fine.n_g >= coarse.n_g && fine.n_b >= coarse.n_b && fine.s >= coarse.s);
        prop_assert!(fine.worst_case_samples() >= coarse.worst_case_samples());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recovery_counts_and_replays(seed in any::<u64>(), d in 3usize..8, mode_idx in 0usize..3) {
        let mode = [VertexMode::Randomized, VertexMode::Derandomized, VertexMode::Exhaustive][mode_idx];
        let class = RidgeClass::sparse(1.0, 1);
        let truth = draw_instance(&ProfileFamily::Mixed, 2.0, d, class, seed).unwrap();
        let params = select_parameters(&request(d, 0.2, mode, seed)).unwrap();
        let mut o1 = CountingOracle::unlimited(&truth);
        let res = recover(&mut o1, &params).unwrap();
        let mut o2 = CountingOracle::unlimited(&truth);
        let again = recover(&mut o2, &params).unwrap();
        prop_assert_eq!(&res, &again);
        prop_assert_eq!(o1.ledger(), o2.ledger());
        let exact = params.exact_sample_count(res.diagnostics.scanned_vertices, res.scenario == Scenario::A);
        prop_assert_eq!(res.samples_used as u128, exact);
        prop_assert!(exact <= params.worst_case_samples());
        prop_assert!(o1.ledger().iter().all(|q| q.point.iter().all(|x| x.abs() <= 1.0)));
    }

    #[test]
    fn estimate_is_attained_at_its_witness(seed in any::<u64>(), d in 2usize..6) {
        let class = RidgeClass::compressible(1.0);
        let truth = draw_instance(&ProfileFamily::Mixed, 2.0, d, class, seed).unwrap();
        let other = draw_instance(&ProfileFamily::Mixed, 2.0, d, class, seed ^ 1).unwrap();
        let params = select_parameters(&request(d, 0.5, VertexMode::Exhaustive, seed)).unwrap();
        let mut o = CountingOracle::unlimited(&other);
        let model = recover(&mut o, &params).unwrap().model;
        let opts = EstimateOptions { resolution: 60, random_samples: 100, seed };
        let est = sup_error_estimate(&truth, &model, &opts).unwrap();
        let w = &est.certificate_points[0];
        prop_assert!(w.iter().all(|x| x.abs() <= 1.0));
        prop_assert_eq!(est.value, (truth.value(w) - model.eval(w)).abs());
    }
}
