use std::f64::consts::PI;

use efz_core::bounds::*;
use efz_core::primes::build_table;
use efz_core::special::EULER_GAMMA;
use efz_core::Execution;
use proptest::prelude::*;

const LN_4: f64 = 2.0 * std::f64::consts::LN_2;

#[test]
fn lowest_zero_substitution() {
    let r = lowest_zero_bound_log(10f64.exp());
    assert!(r.valid);
    let want = PI / 20.0 + PI * (LN_4 + 1.0) / 200.0;
    assert!((r.value - want).abs() < 1e-12);
    assert!(!lowest_zero_bound(1e5).valid);
}

#[test]
fn lowest_zero_monotone() {
    let mut prev = f64::INFINITY;
    for k in 0..100 {
        let l = 3.1 + k as f64 * 0.5;
        let v = lowest_zero_bound_log(l.exp()).value;
        assert!(v < prev);
        prev = v;
    }
}

#[test]
fn zero_count_optimal_a() {
    for c in [3.0, 4.0, 6.5] {
        let r = maximize_by_golden(c);
        assert!((r - 1.0 / (c - LN_4)).abs() < 1e-6, "C = {c}");
        let best = zero_count_objective(1.0 / (c - LN_4), c);
        assert!((best - PI * PI / 8.0 * (c - LN_4 - 1.0)).abs() < 1e-12);
    }
    let q = 1e100;
    let rep = low_zero_count(q, 3.0);
    let l = q.ln().ln();
    assert!((rep.value - PI * PI / 8.0 * (3.0 - LN_4 - 1.0) * q.ln() / (l * l)).abs() < 1e-9);
}

fn maximize_by_golden(c: f64) -> f64 {
    minimize_1d(|a| -zero_count_objective(a, c), 0.05, 5.0, 1e-10)
        .unwrap()
        .argmin
}

#[test]
fn central_order_delta_choice() {
    let r = minimize_1d(central_order_delta_objective, 0.0, 10.0, 1e-10).unwrap();
    assert!((r.argmin - 2.0 * LN_4).abs() < 1e-6);
    assert!((r.optimum - (LN_4 + 1.0) / 2.0).abs() < 1e-12);
}

#[test]
fn central_order_and_nonreal_leading_terms() {
    let mut prev_err = f64::INFINITY;
    for l in [5.0f64, 10.0, 20.0, 40.0, 80.0] {
        let lq = l.exp();
        let r2 = central_order_bound_log(lq);
        let ratio = r2.value * 2.0 * l / lq;
        let err = (ratio - 1.0).abs();
        assert!(err < prev_err);
        prev_err = err;
        let r1 = lowest_zero_bound_log(lq);
        let r3 = nonreal_zero_bound_log(lq);
        assert!((r3.term("main").unwrap() - 2.0 * r1.term("main").unwrap()).abs() < 1e-15);
    }
}

#[test]
fn family_bounds_substitution() {
    let q = (100f64).exp();
    let r = family_bounds(q).unwrap();
    let max_gamma = &r[2];
    assert!(
        (max_gamma.term("second_order").unwrap() - (0.5772156649 + (8.0 * PI).ln()) / 400.0).abs()
            < 1e-10
    );
    assert!(r[1].value < 0.25 && 0.25 < max_gamma.value);
    assert!((r[0].value - (0.5 - (100f64).ln() / 200.0)).abs() < 1e-14);
    assert!(family_bounds(5.0).is_err());
}

#[test]
fn max_zero_expansion_consistent() {
    for bt in [1e-2, 1e-3, 1e-4] {
        let (lhs, rhs) = max_zero_expansion(bt);
        assert!((lhs - rhs).abs() < 5.0 * bt * bt, "{bt}: {lhs} {rhs}");
    }
    let q: f64 = 1e40;
    let bt = (PI.ln() + EULER_GAMMA + 3.0 * 2f64.ln()) / q.ln();
    let (lhs, rhs) = max_zero_expansion(bt);
    assert!((lhs - rhs).abs() < bt * bt * 5.0);
}

#[test]
fn falpha_constants_match() {
    let k = falpha_constants().unwrap();
    assert!((k.alpha0 - 1.8652).abs() < 5e-4);
    assert!((k.f_alpha0 - 0.7757).abs() < 5e-4);
    assert!((k.beta0 - 0.9098).abs() < 5e-4);
    assert!(k.search.unimodal);
}

#[test]
fn proportion_examples() {
    let pi2 = PI * PI;
    assert!(
        (hr_proportion(1.0).unwrap() - (1.0 - (123.0 + 9.0 * pi2) / (108.0 * pi2))).abs() < 1e-12
    );
    assert!((hr_proportion(1.0).unwrap() - 0.8013).abs() < 1e-3);
    assert!((hr_proportion(1e4).unwrap() - hr_limit()).abs() < 1e-6);
    assert!((hr_limit() - 0.89133).abs() < 1e-5);
    let k = falpha_constants().unwrap();
    assert!((falpha_proportion(2.0).unwrap() - 1.0 / (1.0 + k.f_alpha0 / 16.0)).abs() < 1e-12);
    assert!((falpha_proportion(2.0).unwrap() - 0.9538).abs() < 1e-4);
    assert!((falpha_proportion(1.0).unwrap() - 0.8376).abs() < 1e-4);
    assert!(hr_proportion(0.5).is_err());
}

#[test]
fn falpha_proportion_continuous_and_monotone() {
    let k = falpha_constants().unwrap();
    let below = falpha_proportion(k.beta0 - 1e-9).unwrap();
    let above = falpha_proportion(k.beta0).unwrap();
    assert!((below - above).abs() < 1e-7);
    let mut prev = 0.0;
    for i in 0..500 {
        let b = k.beta0 + i as f64 * 0.1;
        let v = falpha_proportion(b).unwrap();
        assert!(v >= prev);
        prev = v;
    }
}

#[test]
fn falpha_first_branch_forms_agree() {
    for i in 1..40 {
        let b = 0.5 + i as f64 * 0.01;
        let a = falpha_proportion(b).unwrap();
        let c = falpha_proportion_first_branch(b).unwrap();
        assert!((a - c).abs() < 1e-12, "{b}");
    }
}

#[test]
fn falpha_beats_hr() {
    for i in 0..400 {
        let b = 0.51 + (20.0 - 0.51) * (i as f64 + 0.5) / 400.0;
        assert!(falpha_proportion(b).unwrap() > hr_proportion(b).unwrap());
    }
}

#[test]
fn proportions_in_unit_interval() {
    for i in 0..300 {
        let b = 0.501 + i as f64 * 0.1;
        for v in [
            hr_proportion(b).unwrap(),
            falpha_proportion(b).unwrap(),
            general_modulus_proportion(b).unwrap(),
        ] {
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(general_modulus_proportion(b).unwrap() <= falpha_proportion(b).unwrap() + 1e-12);
    }
    for i in 0..=50 {
        let b = 0.25 * i as f64 / 50.0;
        let v = ltheta_proportion(b).unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
}

#[test]
fn ltheta_closed_form_matches_maximization() {
    assert!((ltheta_proportion(0.0).unwrap() - 0.5).abs() < 1e-15);
    for i in 0..=10 {
        let b = 0.25 * i as f64 / 10.0;
        let a = ltheta_proportion(b).unwrap();
        let n = ltheta_proportion_numeric(b).unwrap();
        assert!((a - n).abs() < 1e-8, "β {b}: {a} vs {n}");
    }
    assert!(ltheta_proportion(0.3).is_err());
}

#[test]
fn quadratic_boundary_values() {
    assert!((quadratic_boundary() - 0.6489).abs() < 1e-3);
    let n = quadratic_boundary_numeric().unwrap();
    assert!((n - quadratic_boundary()).abs() < 1e-9, "{n}");
    assert!(quadratic_proportion(0.6).is_err());
}

#[test]
fn quadratic_proportion_against_dense_grid() {
    for b in [0.66, 0.8, 1.0, 2.0, 5.0] {
        let r = quadratic_proportion(b).unwrap();
        // Independent dense search over feasible α.
        let hi = PI * PI * b;
        let mut best = 0.0f64;
        for i in 1..10_000 {
            let a = 1.0 + (hi - 1.0) * i as f64 / 10_000.0;
            let s = ((a + 1.0) / (a - 1.0)).sqrt();
            if s * (a + 1.0) < PI * PI * b && s < 2.0 * b {
                best = best.max(quadratic_objective(a, b));
            }
        }
        assert!(r.value >= best - 1e-9, "β {b}: {} < {best}", r.value);
        assert!(r.value <= best + 1e-4, "β {b}: {} ≫ {best}", r.value);
        let s = ((r.alpha + 1.0) / (r.alpha - 1.0)).sqrt();
        assert!(s * (r.alpha + 1.0) < PI * PI * b && s < 2.0 * b);
    }
    let v1 = quadratic_proportion(1.0).unwrap().value;
    assert!(v1 > 0.0 && v1 < 1.0);
    let big = quadratic_proportion(1e4).unwrap().value;
    assert!(big > 0.99);
}

#[test]
fn quadratic_family_maximum() {
    let r = quadratic_beta_max().unwrap();
    assert!((r.beta - 0.7229).abs() < 5e-4, "{r:?}");
    assert!((r.t_coef - 0.83).abs() < 0.01);
    // Binding equality at t = 0.83 by an independent bisection on β.
    let t = 0.83;
    let k = efz_core::TestFunction::kernel();
    let cond = |b: f64| (1.0 / t - 4.0 / (PI * PI)) / k.fourier(2.0 * PI * b * t) < 2.0;
    let (mut lo, mut hi) = (0.1, 1.2);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if cond(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((quadratic_beta_at(t) - lo).abs() < 1e-6);
}

#[test]
fn lambda_endpoints() {
    let l0 = lambda_exponent(0.0).unwrap();
    assert!(l0.lambda <= 0.6 + 1e-6, "{l0:?}");
    let l1 = lambda_exponent(0.7229).unwrap();
    assert!(l1.lambda <= 0.915 + 1e-3, "{l1:?}");
    let mid = lambda_exponent(0.4).unwrap();
    assert!(l0.lambda <= mid.lambda && mid.lambda <= l1.lambda);
}

#[test]
fn interval_bound_values() {
    let a1 = interval_min_bound(1.0).unwrap();
    assert!((a1 - 0.5 * ((PI * PI / 2.0) / (PI * PI / 2.0 - 2.0)).sqrt()).abs() < 1e-14);
    assert!((a1 - 0.64836).abs() < 1e-5);
    let mut prev = f64::INFINITY;
    for i in 1..=200 {
        let a = 0.3 + 0.7 * i as f64 / 200.0;
        let v = interval_min_bound(a).unwrap();
        assert!(v < prev);
        prev = v;
    }
    assert!(interval_min_bound(0.0).is_err());
    assert!(interval_min_bound(1.1).is_err());
}

#[test]
fn effective_thresholds() {
    let table = build_table(1_000).unwrap();
    let r = effective_q0(5.0 / 7.0, 2.9, &table).unwrap();
    assert!(r.q0 > 1.9e20 && r.q0 < 2.3e20, "{r:?}");
    assert!((r.q0 - PI * r.c.exp()).abs() < 1e-6 * r.q0);
    let small = build_table(100).unwrap();
    assert!(effective_q0(5.0 / 7.0, 2.9, &small).is_err());
}

#[test]
fn effective_execution_policies_agree() {
    let table = build_table(1_000).unwrap();
    let a = effective_q0_with(1.0, 2.6, &table, Execution::Sequential).unwrap();
    let b = effective_q0_with(1.0, 2.6, &table, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn effective_chain_holds() {
    let k = effective_constants().unwrap();
    assert!((k.kernel_max - 1.5049).abs() < 1e-3);
    assert!((k.kernel_integral - 17.197).abs() < 1e-3);
    assert!(k.gauss <= 4.228 && (k.gauss - 4.22745).abs() < 1e-5);
    assert!(effective_verify().unwrap());
    assert!(!effective_zero_bound(1e20).valid);
    let r = effective_zero_bound(1e30);
    assert!(r.valid && r.value > 0.0);
    // f(q) ≥ log q/(4.156(L-2)) for L ≥ 12.
    for i in 0..100 {
        let l = 12.0 + i as f64;
        let p = effective_chain(l).unwrap();
        assert!(p.f_q >= l.exp() / (4.156 * (l - 2.0)));
    }
}

#[test]
fn helper_degenerate_cases() {
    // Tiny b makes X huge, so the linear branch c/((1+Δ)a) is the minimum.
    let small_c = helper_t_lower(1.0, 1e-30, 10.0, 1.0).unwrap();
    assert!((small_c - 5.0).abs() < 1e-12);
    // Large c makes the logarithmic branch the minimum.
    let big_c = helper_t_lower(1.0, 1e-30, 1e6, 1.0).unwrap();
    let x: f64 = 1e6 / (2.0 * 1e-30);
    assert!((big_c - (x.ln() + 3.0 * x.ln().ln())).abs() < 1e-9);
    assert_eq!(
        helper_t_lower(1.0, 10.0, 1.0, 1e-9).unwrap(),
        f64::NEG_INFINITY
    );
    assert!(helper_t_lower(0.0, 1.0, 1.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn helper_contrapositive(
        a in 0.01f64..10.0,
        b in 1e-4f64..10.0,
        c in 1.0f64..1e4,
        delta in 0.01f64..5.0,
    ) {
        let bound = helper_t_lower(a, b, c, delta).unwrap();
        // Every T ≥ 3 with aT + b e^T/T³ ≥ c lies at or above the bound.
        for i in 0..4000 {
            let t = 3.0 + i as f64 * 0.01;
            if a * t + b * t.exp() / t.powi(3) >= c {
                prop_assert!(t >= bound - 1e-9, "T = {} below bound {}", t, bound);
            }
        }
    }
}

#[test]
fn figures() {
    let fig1 = figure_data(
        Figure::Fig1,
        &"0.51:5:0.01".parse().unwrap(),
        Execution::default(),
    )
    .unwrap();
    assert_eq!(fig1.columns.len(), 3);
    let row = fig1
        .rows
        .iter()
        .find(|r| (r[0] - 1.0).abs() < 1e-9)
        .unwrap();
    assert!((row[1] - 0.8013).abs() < 1e-3 && (row[2] - 0.8376).abs() < 1e-3);
    assert!(fig1.rows.iter().all(|r| r[2] >= r[1]));
    let fig2 = figure_data(
        Figure::Fig2,
        &"0.649:3:0.01".parse().unwrap(),
        Execution::default(),
    )
    .unwrap();
    assert!((fig2.rows[0][0] - 0.649).abs() < 1e-12);
    assert!(figure_data(
        Figure::Fig2,
        &"0.6:1:0.1".parse().unwrap(),
        Execution::default()
    )
    .is_err());
    let csv = fig1.to_csv();
    assert!(csv.starts_with("beta,hr_proportion,falpha_proportion\n"));
    let json = fig2.to_json();
    assert!(json.as_array().unwrap()[0]["quadratic_proportion"].is_number());
}

#[test]
fn reports_deterministic() {
    for q in [1e25, 1e50, 1e100] {
        assert_eq!(lowest_zero_bound(q), lowest_zero_bound(q));
        assert_eq!(family_bounds(q).unwrap(), family_bounds(q).unwrap());
    }
    assert_eq!(
        quadratic_proportion(1.0).unwrap(),
        quadratic_proportion(1.0).unwrap()
    );
}
