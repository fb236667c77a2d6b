//! The archimedean term of the explicit formula,
//! `I(F) = ∫_0^∞ (F(x/2) e^{-(1/4+s/2)x}/(1-e^{-x}) - e^{-x}/x) dx`,
//! applied to the dilation `F_T(x) = F(x/T)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::optimize::maximize_1d;
use crate::quad::Quad;
use crate::special::{exp_integral_e1, trigamma_pos};
use crate::testfuncs::TestFunction;

pub use crate::special::digamma;

/// Below this point the integrand is assembled from series expansions.
const SERIES_CUTOFF: f64 = 1e-3;

/// Absolute tolerance of [`i_arch`].
pub const I_ARCH_TOL: f64 = 1e-10;

/// Parameters of one archimedean integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchimedeanQuery {
    pub f: TestFunction,
    /// Dilation `T > 0`.
    pub t_dil: f64,
    /// Shift `> -1`: the parity δ for Dirichlet characters, Re μ_j in general.
    pub shift: f64,
}

impl ArchimedeanQuery {
    pub fn new(f: TestFunction, t_dil: f64, shift: f64) -> Result<Self> {
        if !(t_dil > 0.0) || !t_dil.is_finite() {
            return domain(format!("archimedean query needs T > 0, got {t_dil}"));
        }
        if !(shift > -1.0) {
            return domain(format!("archimedean query needs shift > -1, got {shift}"));
        }
        Ok(ArchimedeanQuery { f, t_dil, shift })
    }
}

/// `e^{-ax}/(1-e^{-x}) - 1/x`, finite at 0.
fn regular_part(a: f64, x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let c0 = 0.5 - a;
        let c1 = a * a / 2.0 - a / 2.0 + 1.0 / 12.0;
        let c2 = -a * a * a / 6.0 + a * a / 4.0 - a / 12.0;
        let c3 = a.powi(4) / 24.0 - a.powi(3) / 12.0 + a * a / 24.0 - 1.0 / 720.0;
        c0 + x * (c1 + x * (c2 + x * c3))
    } else {
        (-a * x).exp() / -(-x).exp_m1() - 1.0 / x
    }
}

/// `(1 - e^{-x})/x`, finite at 0.
fn one_minus_exp_over(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        1.0 - x / 2.0 * (1.0 - x / 3.0 * (1.0 - x / 4.0))
    } else {
        -(-x).exp_m1() / x
    }
}

/// The archimedean integral `I(F_T)` for the given shift.
///
/// The range is split at the support edge `2cT`; beyond it the integrand is
/// `-e^{-x}/x`, whose integral is `-E₁(2cT)`.
pub fn i_arch(q: &ArchimedeanQuery) -> Result<f64> {
    let a = 0.25 + 0.5 * q.shift;
    let c = q.f.support_halfwidth();
    let scale = 2.0 * q.t_dil;
    let edge = c * scale;
    // Where e^{-ax} makes the remaining F-part negligible.
    let negligible = if a > 0.0 { 40.0 / a } else { f64::INFINITY };
    let upper = edge.min(negligible.max(1.0));
    if !upper.is_finite() {
        return domain("i_arch: non-compact test function needs shift > -1/2");
    }
    let f = &q.f;
    let integrand = |x: f64| {
        let fx = f.eval(x / scale);
        fx * regular_part(a, x) + (fx - 1.0) / x + one_minus_exp_over(x)
    };
    let mut pts = vec![0.0];
    let mut k = 1.0;
    while k < c {
        if k * scale < upper {
            pts.push(k * scale);
        }
        k += 1.0;
    }
    for p in [SERIES_CUTOFF, 1.0, 8.0, 32.0] {
        if p < upper {
            pts.push(p);
        }
    }
    pts.push(upper);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let body = Quad::abs(0.5 * I_ARCH_TOL)
        .limit(10_000)
        .integrate(integrand, &pts)?
        .value;
    // On [0, upper] we integrated F·E + (F-1)/x + (1-e^{-x})/x, which equals the
    // true integrand; past `upper` only -e^{-x}/x survives (up to e^{-40}).
    Ok(body - exp_integral_e1(upper)?)
}

/// `(max_x k(x), ∫_0^∞ k(x) dx)` for `k(x) = x e^{-x/4}/(1-e^{-x})`.
pub fn kernel_max_and_integral() -> Result<(f64, f64)> {
    let k = |x: f64| x * (-0.25 * x).exp() / -(-x).exp_m1();
    let max = maximize_1d(k, 0.01, 20.0, 1e-10)?.optimum;
    let integral = Quad::abs(1e-11).integrate_to_infinity(k, 0.0)?.value;
    Ok((max, integral))
}

/// Closed form of the kernel integral: ψ'(1/4) = Σ_k 1/(k + 1/4)².
pub fn kernel_integral_closed_form() -> f64 {
    trigamma_pos(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::EULER_GAMMA;
    use std::f64::consts::PI;

    #[test]
    fn regular_part_is_continuous_at_cutoff() {
        for a in [0.25, 0.75, -0.2, 1.5] {
            let lo = regular_part(a, SERIES_CUTOFF * (1.0 - 1e-12));
            let hi = regular_part(a, SERIES_CUTOFF * (1.0 + 1e-12));
            assert!((lo - hi).abs() < 1e-11, "a = {a}");
        }
    }

    #[test]
    fn flat_limit_is_gauss_integral() {
        // For very large T the triangle is flat on the effective range and the
        // integral tends to -ψ(1/4 + δ/2), with first-order correction
        // -ψ'(1/4 + δ/2)/(2T).
        let h = TestFunction::triangle();
        for (shift, gauss) in [
            (0.0, EULER_GAMMA + 3.0 * 2f64.ln() + PI / 2.0),
            (1.0, EULER_GAMMA + 3.0 * 2f64.ln() - PI / 2.0),
        ] {
            let t = 1e6;
            let v = i_arch(&ArchimedeanQuery::new(h, t, shift).unwrap()).unwrap();
            let corr = trigamma_pos(0.25 + shift / 2.0) / (2.0 * t);
            assert!((v - (gauss - corr)).abs() < 1e-9, "shift {shift}: {v}");
            let v = i_arch(&ArchimedeanQuery::new(h, 1e8, shift).unwrap()).unwrap();
            assert!((v - gauss).abs() < 1e-6);
        }
    }

    #[test]
    fn kernel_constants() {
        let (m, i) = kernel_max_and_integral().unwrap();
        assert!((m - 1.504).abs() < 1e-3);
        assert!((i - 17.197).abs() < 1e-3);
        assert!((i - kernel_integral_closed_form()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_queries() {
        let h = TestFunction::triangle();
        assert!(ArchimedeanQuery::new(h, 0.0, 0.0).is_err());
        assert!(ArchimedeanQuery::new(h, 1.0, -1.0).is_err());
        let g = TestFunction::g_beta_minorant(1).unwrap();
        let q = ArchimedeanQuery::new(g, 1.0, -0.6).unwrap();
        assert!(i_arch(&q).is_err());
    }
}
