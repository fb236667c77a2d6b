//! One-dimensional minimization and root bracketing.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Outcome of a one-dimensional search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Location of the optimum.
    pub argmin: f64,
    /// Objective value at `argmin`.
    pub optimum: f64,
    pub iterations: usize,
    /// Final bracket, which contains `argmin`.
    pub bracket: (f64, f64),
    /// False when neighbor sampling found a lower value away from `argmin`.
    pub unimodal: bool,
}

/// Inverse golden ratio.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Number of samples used for the post-hoc unimodality check.
const UNIMODAL_SAMPLES: usize = 64;

/// Golden-section minimization of `f` on `[lo, hi]`.
///
/// # Arguments
/// * `f` - Objective, assumed unimodal on the interval.
/// * `lo`, `hi` - Search interval, `lo < hi`.
/// * `tol` - Target width of the final bracket.
pub fn minimize_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<OptimizationResult> {
    if !(lo < hi) || !(tol > 0.0) {
        return domain(format!(
            "minimize_1d needs lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        ));
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a) > tol && iterations < 500 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    // Compare the interior probes with the bracket ends, which may be the
    // true optimum when it sits on the boundary of [lo, hi].
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    let span = hi - lo;
    let scale = best.1.abs().max(1.0);
    let unimodal = (0..=UNIMODAL_SAMPLES).all(|i| {
        let x = lo + span * i as f64 / UNIMODAL_SAMPLES as f64;
        f(x) >= best.1 - 1e-9 * scale
    });
    Ok(OptimizationResult {
        argmin: best.0,
        optimum: best.1,
        iterations,
        bracket: (a.min(best.0), b.max(best.0)),
        unimodal,
    })
}

/// Golden-section maximization; the returned `optimum` is the maximum value.
pub fn maximize_1d<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<OptimizationResult> {
    let mut r = minimize_1d(|x| -f(x), lo, hi, tol)?;
    r.optimum = -r.optimum;
    Ok(r)
}

/// Brent's method for a root of `f` in `[a, b]`, where `f(a)` and `f(b)`
/// have opposite signs (or one of them vanishes).
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    find_root_with(&mut f, a, fa, b, fb, tol)
}

/// Brent's method given precomputed endpoint values.
pub fn find_root_with<F: FnMut(f64) -> f64>(
    f: &mut F,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
    tol: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!(
            "find_root: no sign change on [{a}, {b}] ({fa:e}, {fb:e})"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::Precision {
        achieved: (c - b).abs(),
        required: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let r = minimize_1d(|x| x * x, -1.0, 1.0, 1e-10).unwrap();
        assert!(r.argmin.abs() < 1e-9);
        assert!(r.unimodal);
        assert!(r.bracket.0 <= r.argmin && r.argmin <= r.bracket.1);
        assert_eq!(r.optimum, r.argmin * r.argmin);
    }

    #[test]
    fn boundary_optimum() {
        let r = minimize_1d(|x| x, 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(r.argmin, 0.0);
    }

    #[test]
    fn flags_multimodal() {
        let r = minimize_1d(|x: f64| (3.0 * x).cos() + 0.1 * x, 0.0, 10.0, 1e-8).unwrap();
        let global = (0..10_000)
            .map(|i| {
                let x = i as f64 * 1e-3;
                (3.0 * x).cos() + 0.1 * x
            })
            .fold(f64::INFINITY, f64::min);
        if r.optimum > global + 1e-6 {
            assert!(!r.unimodal);
        }
    }

    #[test]
    fn brent_roots() {
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        let r = find_root(|x: f64| x.cos() - x, 0.0, 1.0, 1e-14).unwrap();
        assert!((r.cos() - r).abs() < 1e-13);
        assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10).is_err());
    }
}
