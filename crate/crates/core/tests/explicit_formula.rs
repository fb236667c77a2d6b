use efz_core::characters::build_characters;
use efz_core::explicit_formula::{
    balance, mestre_rhs, weil_rhs, zero_side, zero_tail_bound, DirichletCoefficients, MestreData,
};
use efz_core::primes::build_table;
use efz_core::zerofinder::{find_zeros, find_zeros_for_modulus, gamma_stats};
use efz_core::{Execution, TestFunction};
use num_complex::Complex64;

#[test]
fn balance_mod_four() {
    let table = build_table(100_000).unwrap();
    let chars = build_characters(4).unwrap();
    let chi = chars.primitive().next().unwrap();
    let zeros = find_zeros(chi, 60.0).unwrap();
    for f in [TestFunction::triangle(), TestFunction::kernel()] {
        for t in [2.0, 4.0] {
            let b = balance(chi, &zeros, f, t, &table).unwrap();
            assert!(
                b.holds(1e-6),
                "{f} T={t}: residual {} tail {}",
                b.residual,
                b.tail_bound
            );
            // The tail bound should not be vacuous.
            assert!(b.tail_bound < 0.1);
        }
    }
}

#[test]
fn balance_small_moduli() {
    let table = build_table(100_000).unwrap();
    for q in [3u64, 5, 7, 8, 12, 15] {
        let chars = build_characters(q).unwrap();
        let lists = find_zeros_for_modulus(&chars, 60.0, Execution::default()).unwrap();
        for zl in &lists {
            let chi = chars.get(zl.char_index).unwrap();
            let b = balance(chi, zl, TestFunction::triangle(), 4.0, &table).unwrap();
            assert!(
                b.holds(1e-6),
                "q {q}: residual {} tail {}",
                b.residual,
                b.tail_bound
            );
        }
    }
}

#[test]
fn weil_rhs_terms_compose() {
    let table = build_table(1000).unwrap();
    let chars = build_characters(3).unwrap();
    let chi = chars.primitive().next().unwrap();
    let e = weil_rhs(chi, TestFunction::f_alpha(2.6).unwrap(), 4.71, &table).unwrap();
    assert_eq!(e.rhs, e.log_term - e.arch_term - e.prime_term);
    assert!(e.rhs >= (3.0f64 / std::f64::consts::PI).ln() - 20.98);
    // Support below log 2: no prime powers contribute.
    let tiny = weil_rhs(chi, TestFunction::triangle(), 1e-3, &table).unwrap();
    assert_eq!(tiny.prime_term, 0.0);
}

#[test]
fn weil_rhs_rejects_imprimitive() {
    let table = build_table(1000).unwrap();
    let chars = build_characters(9).unwrap();
    let chi = chars
        .characters()
        .iter()
        .find(|c| !c.is_primitive() && !c.is_principal())
        .unwrap();
    assert!(weil_rhs(chi, TestFunction::triangle(), 2.0, &table).is_err());
    assert!(weil_rhs(chars.principal(), TestFunction::triangle(), 2.0, &table).is_err());
}

#[test]
fn mestre_specializes_to_dirichlet() {
    let table = build_table(1000).unwrap();
    for q in [3u64, 4, 5, 7] {
        let chars = build_characters(q).unwrap();
        for chi in chars.primitive() {
            let mu = [Complex64::new(chi.parity() as f64, 0.0)];
            let coeffs = DirichletCoefficients(chi);
            let data = MestreData {
                conductor: q as f64,
                mu: &mu,
                r_pole: 0,
                theta: 0.0,
                coeffs: &coeffs,
            };
            for f in [
                TestFunction::triangle(),
                TestFunction::f_alpha(3.0).unwrap(),
            ] {
                for t in [2.0, 4.0] {
                    let w = weil_rhs(chi, f, t, &table).unwrap();
                    let m = mestre_rhs(&data, f, t, &table).unwrap();
                    assert!((w.rhs - m.rhs).abs() < 1e-9, "q {q} {f} T={t}");
                }
            }
        }
    }
}

#[test]
fn mestre_pole_term_is_cosh_integral() {
    let table = build_table(1000).unwrap();
    let chars = build_characters(4).unwrap();
    let chi = chars.primitive().next().unwrap();
    let coeffs = DirichletCoefficients(chi);
    let mu = [Complex64::new(0.0, 0.0)];
    let t = 3.0;
    let with_pole = MestreData {
        conductor: 1.0,
        mu: &mu,
        r_pole: 1,
        theta: 0.0,
        coeffs: &coeffs,
    };
    let m = mestre_rhs(&with_pole, TestFunction::triangle(), t, &table).unwrap();
    // 2∫_{-T}^{T} (1-|x|/T) cosh(x/2) dx = 16 (cosh(T/2) - 1)/T.
    let want = 16.0 * ((t / 2.0).cosh() - 1.0) / t;
    assert!((m.pole_term - want).abs() < 1e-9);
}

#[test]
fn tail_bound_rejects_low_band() {
    assert!(zero_tail_bound(3, TestFunction::triangle(), 2.0, 0.5).is_err());
    assert!(zero_tail_bound(3, TestFunction::j_beta(2.0).unwrap(), 2.0, 60.0).is_err());
}

#[test]
fn positivity_mechanism_small_q() {
    let fa = TestFunction::f_alpha(3.0).unwrap();
    let table = build_table(1000).unwrap();
    for q in [3u64, 4, 5, 7, 8] {
        let chars = build_characters(q).unwrap();
        for zl in find_zeros_for_modulus(&chars, 60.0, Execution::default()).unwrap() {
            let st = gamma_stats(&zl);
            let t = fa.sign_threshold() / st.gamma1;
            let zs = zero_side(&zl, fa, t);
            let tail = zero_tail_bound(q, fa, t, zl.height).unwrap();
            assert!(zs <= tail, "q {q}: {zs} > {tail}");
            let _ = &table;
        }
    }
}
