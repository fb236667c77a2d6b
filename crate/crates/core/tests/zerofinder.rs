use efz_core::characters::{build_characters, Character};
use efz_core::zerofinder::{
    find_zeros, find_zeros_for_modulus, gamma_stats, l_on_critical_line, zero_count_band,
    HardyEvaluator,
};
use efz_core::Execution;
use num_complex::Complex64;
use serde_json::Value;

fn fixture() -> Value {
    let text = include_str!("fixtures/lfunction_oracle.json");
    serde_json::from_str(text).unwrap()
}

/// The table character whose values match the oracle entry.
fn matching_character(entry: &Value) -> Character {
    let q = entry["q"].as_u64().unwrap();
    let re: Vec<f64> = serde_json::from_value(entry["values_re"].clone()).unwrap();
    let im: Vec<f64> = serde_json::from_value(entry["values_im"].clone()).unwrap();
    let table = build_characters(q).unwrap();
    table
        .characters()
        .iter()
        .find(|c| {
            (0..q).all(|n| {
                let v = c.eval(n);
                (v - Complex64::new(re[n as usize], im[n as usize])).norm() < 1e-12
            })
        })
        .expect("oracle character present in table")
        .clone()
}

#[test]
fn l_values_match_mpmath() {
    let fx = fixture();
    for (name, entry) in fx.as_object().unwrap() {
        let chi = matching_character(entry);
        for pt in entry["l_values"].as_array().unwrap() {
            let t = pt["t"].as_f64().unwrap();
            let want = Complex64::new(pt["re"].as_f64().unwrap(), pt["im"].as_f64().unwrap());
            let got = l_on_critical_line(&chi, t).unwrap();
            assert!((got - want).norm() < 1e-10, "{name} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn zeros_match_mpmath() {
    let fx = fixture();
    for (name, entry) in fx.as_object().unwrap() {
        let chi = matching_character(entry);
        let want: Vec<f64> = serde_json::from_value(entry["zeros"].clone()).unwrap();
        let list = find_zeros(&chi, 20.0).unwrap();
        assert!(list.complete, "{name}");
        let got = list.ordinates();
        assert_eq!(got.len(), want.len(), "{name}: {got:?}");
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-8, "{name}: {g} vs {w}");
        }
        for z in &list.zeros {
            assert!(z.residual < 1e-8);
        }
    }
}

#[test]
fn conjugate_zeros_mirror() {
    let table = build_characters(5).unwrap();
    let lists = find_zeros_for_modulus(&table, 25.0, Execution::default()).unwrap();
    for list in &lists {
        let chi = table.get(list.char_index).unwrap();
        let conj = table.conjugate(chi);
        let other = lists.iter().find(|l| l.char_index == conj.index()).unwrap();
        let a = list.ordinates();
        let mut b: Vec<f64> = other.ordinates().iter().map(|g| -g).collect();
        b.sort_by(f64::total_cmp);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-8);
        }
    }
}

#[test]
fn shared_grid_agrees_with_single_character_scan() {
    for q in [7u64, 12, 13] {
        let table = build_characters(q).unwrap();
        let lists = find_zeros_for_modulus(&table, 20.0, Execution::Sequential).unwrap();
        assert_eq!(lists.len(), table.primitive().count());
        for list in &lists {
            let chi = table.get(list.char_index).unwrap();
            let single = find_zeros(chi, 20.0).unwrap();
            let (a, b) = (list.ordinates(), single.ordinates());
            assert_eq!(a.len(), b.len(), "q {q} index {}", list.char_index);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn counts_fall_in_band() {
    for q in [3u64, 4, 5, 7, 8, 11, 24, 37] {
        let table = build_characters(q).unwrap();
        for list in find_zeros_for_modulus(&table, 40.0, Execution::default()).unwrap() {
            let (main, err, applicable) = zero_count_band(q, 40.0, list.parity);
            assert!(applicable);
            assert!((list.count() as f64 - main).abs() <= err, "q {q}");
            assert!(list.complete);
        }
    }
}

#[test]
fn real_characters_have_unit_root_number() {
    for q in [3u64, 4, 5, 8, 12, 13, 24, 35] {
        let table = build_characters(q).unwrap();
        for chi in table.primitive().filter(|c| c.is_real()) {
            let ev = HardyEvaluator::new(chi, 1.0).unwrap();
            assert!((ev.root_number() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }
}

#[test]
fn low_zero_statistics() {
    let table = build_characters(3).unwrap();
    let chi = table.primitive().next().unwrap();
    let st = gamma_stats(&find_zeros(chi, 15.0).unwrap());
    assert_eq!(st.n_central, 0);
    assert!((st.gamma1 - 8.039_737_155_681_467).abs() < 1e-8);
    assert_eq!(st.gamma1, st.gamma1_nonreal);
}

#[test]
fn csv_export_has_one_row_per_zero() {
    let table = build_characters(4).unwrap();
    let list = find_zeros(table.primitive().next().unwrap(), 20.0).unwrap();
    let csv = list.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("q,char_index,gamma,refined_residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u32, list.count());
    let g: f64 = rows[0].split(',').nth(2).unwrap().parse().unwrap();
    assert!((g - list.zeros[0].gamma).abs() < 1e-11);
}

#[test]
fn real_characters_do_not_vanish_at_center() {
    for q in 3..=300u64 {
        let table = build_characters(q).unwrap();
        for chi in table.primitive().filter(|c| c.is_real()) {
            let st = gamma_stats(&find_zeros(chi, 3.0).unwrap());
            assert_eq!(st.n_central, 0, "q {q} index {}", chi.index());
            assert!(st.complete);
        }
    }
}

#[test]
fn lowest_zero_respects_effective_bound_where_it_applies() {
    for q in [3u64, 4, 5, 7, 8, 11, 13] {
        let table = build_characters(q).unwrap();
        let report = efz_core::bounds::effective_zero_bound(q as f64);
        // The effective range starts far beyond moduli the zero finder reaches.
        assert!(!report.valid);
        for list in find_zeros_for_modulus(&table, 20.0, Execution::default()).unwrap() {
            let st = gamma_stats(&list);
            if report.valid {
                assert!(st.gamma1 <= report.value);
            }
            assert!(st.gamma1.is_finite() && st.gamma1 > 0.0);
        }
    }
}
