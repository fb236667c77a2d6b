//! Special functions: digamma, trigamma, complex log-gamma, Bernoulli
//! numbers and a few removable-singularity helpers.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Euler–Mascheroni constant γ.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Catalan's constant G = Σ (-1)^k / (2k+1)².
#[allow(clippy::excessive_precision)]
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_11;

/// Even-index Bernoulli numbers B_2, B_4, ..., B_30.
pub const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Shift point for the recurrences; the asymptotic series is used beyond it.
const ASYMPTOTIC_FROM: f64 = 10.0;

/// ψ(x) for real x > 0.
///
/// # Arguments
/// * `x` - Positive argument.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("digamma requires x > 0, got {x}"));
    }
    Ok(digamma_pos(x))
}

pub(crate) fn digamma_pos(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < ASYMPTOTIC_FROM {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                    - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}

/// ψ'(x) for real x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("trigamma requires x > 0, got {x}"));
    }
    Ok(trigamma_pos(x))
}

pub(crate) fn trigamma_pos(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < ASYMPTOTIC_FROM {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let r = 1.0 / (x * x);
    let series = 1.0 / 6.0
        - r * (1.0 / 30.0
            - r * (1.0 / 42.0
                - r * (1.0 / 30.0 - r * (5.0 / 66.0 - r * (691.0 / 2730.0 - r * 7.0 / 6.0)))));
    acc + 1.0 / x + 0.5 * r + series * r / x
}

/// log Γ(z) for Re z > 0, on the branch continuous from the positive real axis.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) {
        return domain(format!("ln_gamma requires Re z > 0, got {z}"));
    }
    Ok(ln_gamma_right(z))
}

pub(crate) fn ln_gamma_right(mut z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < ASYMPTOTIC_FROM {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let r = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - r * (1.0 / 360.0
                - r * (1.0 / 1260.0
                    - r * (1.0 / 1680.0
                        - r * (1.0 / 1188.0 - r * (691.0 / 360360.0 - r / 156.0))))));
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Exponential integral E₁(x) = ∫_x^∞ e^{-u}/u du for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("exp_integral_e1 requires x > 0, got {x}"));
    }
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return Ok(-EULER_GAMMA - x.ln() - sum);
    }
    // Modified Lentz evaluation of the continued fraction.
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    Ok(h * (-x).exp())
}

/// sin(x)/x, equal to 1 at x = 0.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// sin(u/2)/u, equal to 1/2 at u = 0.
pub fn sin_half_over(u: f64) -> f64 {
    0.5 * sinc(0.5 * u)
}

/// Σ_{k≥0} 1/(k + a)² evaluated directly, used only as an independent oracle.
pub fn hurwitz2_direct(a: f64, terms: usize) -> f64 {
    let mut s = 0.0;
    for k in (0..terms).rev() {
        let x = k as f64 + a;
        s += 1.0 / (x * x);
    }
    // Integral tail estimate beyond the truncation point.
    let n = terms as f64 + a;
    s + 1.0 / n + 0.5 / (n * n) + 1.0 / (6.0 * n * n * n)
}
