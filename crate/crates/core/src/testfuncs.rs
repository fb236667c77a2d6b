//! Admissible test functions and their Fourier transforms.
//!
//! The transform convention is `F̂(t) = ∫ F(x) e^{itx} dx`. Every family has a
//! closed-form transform and an independent quadrature oracle.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad::Quad;
use crate::special::{sin_half_over, sinc, trigamma_pos};

/// The test-function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `(1-|x|)cos(πx) + (α/π)sin(π|x|)` on `[-1, 1]`, α > 1.
    FAlpha,
    /// The triangle `1-|x|` on `[-1, 1]`.
    Triangle,
    /// `π²/(2(α+2)) · (F^α * H)`, supported on `[-2, 2]`.
    GAlpha,
    /// `F^1`.
    Kernel,
    /// The normalized `L^θ` family on `[-1, 1]`, θ in `[0, π]`.
    LTheta,
    /// The normalized transform of the Beurling–Selberg minorant of `[-β, β]`.
    JBeta,
    /// `g_β = -B⁻_{[-β,β]}` for integer β ≥ 1 (not compactly supported).
    GBetaMinorant,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::FAlpha,
        Family::Triangle,
        Family::GAlpha,
        Family::Kernel,
        Family::LTheta,
        Family::JBeta,
        Family::GBetaMinorant,
    ];

    /// Whether the family carries a numeric parameter.
    pub fn has_param(self) -> bool {
        !matches!(self, Family::Triangle | Family::Kernel)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::FAlpha => "falpha",
            Family::Triangle => "triangle",
            Family::GAlpha => "galpha",
            Family::Kernel => "kernel",
            Family::LTheta => "ltheta",
            Family::JBeta => "jbeta",
            Family::GBetaMinorant => "gbeta",
        }
    }
}

/// A member of one of the [`Family`] variants with a validated parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    family: Family,
    param: f64,
}

/// Tolerance of the convolution quadrature behind [`Family::GAlpha`] evaluation,
/// per unit of the integrand's size `1 + α`. Kronrod panels cannot certify
/// errors below about 50ε times the integral of |integrand|.
const GALPHA_TOL: f64 = 2e-14;

impl TestFunction {
    /// Build a test function, checking the family's parameter constraint.
    ///
    /// # Arguments
    /// * `family` - Which family.
    /// * `param` - α for FAlpha/GAlpha, θ for LTheta, β for JBeta/GBetaMinorant; ignored otherwise.
    pub fn new(family: Family, param: f64) -> Result<Self> {
        let ok = match family {
            Family::FAlpha | Family::GAlpha => param > 1.0 && param.is_finite(),
            Family::Triangle | Family::Kernel => true,
            Family::LTheta => (0.0..=PI).contains(&param),
            Family::JBeta => param > 0.5 && param.is_finite(),
            Family::GBetaMinorant => param >= 1.0 && param.fract() == 0.0 && param <= 1e6,
        };
        if !ok {
            let need = match family {
                Family::FAlpha | Family::GAlpha => "alpha > 1",
                Family::LTheta => "theta in [0, pi]",
                Family::JBeta => "beta > 1/2",
                Family::GBetaMinorant => "beta a positive integer",
                Family::Triangle | Family::Kernel => unreachable!(),
            };
            return domain(format!("{}: requires {need}, got {param}", family.name()));
        }
        let param = if family.has_param() { param } else { 0.0 };
        Ok(TestFunction { family, param })
    }

    pub fn f_alpha(alpha: f64) -> Result<Self> {
        Self::new(Family::FAlpha, alpha)
    }

    pub fn triangle() -> Self {
        TestFunction {
            family: Family::Triangle,
            param: 0.0,
        }
    }

    pub fn g_alpha(alpha: f64) -> Result<Self> {
        Self::new(Family::GAlpha, alpha)
    }

    pub fn kernel() -> Self {
        TestFunction {
            family: Family::Kernel,
            param: 0.0,
        }
    }

    pub fn l_theta(theta: f64) -> Result<Self> {
        Self::new(Family::LTheta, theta)
    }

    pub fn j_beta(beta: f64) -> Result<Self> {
        Self::new(Family::JBeta, beta)
    }

    pub fn g_beta_minorant(beta: u32) -> Result<Self> {
        Self::new(Family::GBetaMinorant, beta as f64)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    /// Half-width of the support; infinite for GBetaMinorant.
    pub fn support_halfwidth(&self) -> f64 {
        match self.family {
            Family::FAlpha | Family::Triangle | Family::Kernel | Family::LTheta => 1.0,
            Family::GAlpha => 2.0,
            Family::JBeta => 2.0 * PI,
            Family::GBetaMinorant => f64::INFINITY,
        }
    }

    /// Points in `(0, support)` where the function is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match self.family {
            Family::GAlpha => vec![1.0],
            Family::GBetaMinorant => (1..=self.param as usize).map(|k| k as f64).collect(),
            _ => Vec::new(),
        }
    }

    /// Pointwise value F(x).
    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax > self.support_halfwidth() {
            return 0.0;
        }
        match self.family {
            Family::FAlpha => f_alpha_eval(self.param, ax),
            Family::Kernel => f_alpha_eval(1.0, ax),
            Family::Triangle => 1.0 - ax,
            Family::LTheta => {
                let th = self.param;
                let u = 1.0 - ax;
                let num = 0.5 * u * sinc(th * u) + 0.5 * u * (th * ax).cos();
                num / (0.5 * sinc(th) + 0.5)
            }
            Family::GAlpha => g_alpha_eval(self.param, ax),
            Family::JBeta => (2.0 * self.param - 1.0).recip() * j_bracket(self.param, ax),
            Family::GBetaMinorant => g_beta_eval(self.param, x),
        }
    }

    /// Closed-form Fourier transform F̂(t).
    pub fn fourier(&self, t: f64) -> f64 {
        match self.family {
            Family::FAlpha => f_alpha_hat(self.param, t),
            Family::Kernel => f_alpha_hat(1.0, t),
            Family::Triangle => {
                let s = sinc(0.5 * t);
                s * s
            }
            Family::GAlpha => {
                let a = self.param;
                let h = sinc(0.5 * t);
                PI * PI / (2.0 * (a + 2.0)) * f_alpha_hat(a, t) * h * h
            }
            Family::LTheta => {
                let th = self.param;
                let s = sin_half_over(th - t) + sin_half_over(th + t);
                s * s / (0.5 * sinc(th) + 0.5)
            }
            Family::JBeta => {
                let b = self.param;
                2.0 * PI * beurling_minorant_interval(b, t) / (2.0 * b - 1.0)
            }
            Family::GBetaMinorant => -j_bracket(self.param, t.abs()),
        }
    }

    /// Fourier transform by adaptive quadrature of the defining integral.
    ///
    /// # Arguments
    /// * `t` - Frequency.
    /// * `tol` - Absolute tolerance.
    pub fn fourier_numeric(&self, t: f64, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return domain("fourier_numeric requires tol > 0");
        }
        if self.family == Family::GBetaMinorant {
            return self.g_beta_fourier_numeric(t, tol);
        }
        let c = self.support_halfwidth();
        let mut pts = vec![0.0];
        pts.extend(self.kinks());
        // Split long oscillatory ranges so each panel sees a few periods at most.
        let periods = (c * t.abs() / (2.0 * PI)).ceil() as usize;
        let pieces = periods.clamp(1, 400);
        let mut grid: Vec<f64> = (1..pieces).map(|k| c * k as f64 / pieces as f64).collect();
        pts.append(&mut grid);
        pts.push(c);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let q = Quad::abs(0.25 * tol).limit(20_000);
        let r = q.integrate(|x| self.eval(x) * (t * x).cos(), &pts)?;
        Ok(2.0 * r.value)
    }

    /// Oracle for the non-compact minorant: the sine-squared factor is split
    /// into exponentials and the tail beyond `X` is rotated into the complex
    /// plane, where each piece decays exponentially.
    fn g_beta_fourier_numeric(&self, t: f64, tol: f64) -> Result<f64> {
        let beta = self.param;
        let x_cut = beta + 2.0;
        let q = Quad::abs(0.1 * tol).limit(20_000);
        let mut pts: Vec<f64> = (0..=(x_cut as usize)).map(|k| k as f64).collect();
        if *pts.last().unwrap() < x_cut {
            pts.push(x_cut);
        }
        let head = q.integrate(|x| self.eval(x) * (t * x).cos(), &pts)?.value;
        // g(x)cos(tx) = R(x)(2 - e^{2πix} - e^{-2πix})/4 · (e^{itx} + e^{-itx})/2.
        let mut tail = Complex64::new(0.0, 0.0);
        for (omega, weight) in [
            (t, 0.25),
            (-t, 0.25),
            (t + 2.0 * PI, -0.125),
            (t - 2.0 * PI, -0.125),
            (-t + 2.0 * PI, -0.125),
            (-t - 2.0 * PI, -0.125),
        ] {
            tail += weight * rational_tail(beta, omega, x_cut, &q)?;
        }
        Ok(2.0 * (head + tail.re))
    }

    /// The value t₀ beyond which the transform is non-positive.
    pub fn sign_threshold(&self) -> f64 {
        match self.family {
            Family::FAlpha | Family::GAlpha => {
                let a = self.param;
                ((a + 1.0) / (a - 1.0)).sqrt() * PI
            }
            Family::JBeta => self.param,
            Family::GBetaMinorant => 2.0 * PI,
            Family::Triangle | Family::Kernel | Family::LTheta => f64::INFINITY,
        }
    }

    /// σ(F) = ∫ |u| F(u)² du over the support.
    pub fn sigma_weight(&self) -> Result<f64> {
        match self.family {
            Family::FAlpha => {
                let a = self.param;
                Ok((6.0 * a * a + PI * PI - 3.0) / (12.0 * PI * PI))
            }
            Family::Kernel => Ok((3.0 + PI * PI) / (12.0 * PI * PI)),
            Family::GBetaMinorant => domain("sigma_weight: gbeta is not compactly supported"),
            _ => self.sigma_weight_numeric(1e-13),
        }
    }

    /// σ(F) by quadrature, for any compactly supported family.
    pub fn sigma_weight_numeric(&self, tol: f64) -> Result<f64> {
        let c = self.support_halfwidth();
        if !c.is_finite() {
            return domain("sigma_weight: gbeta is not compactly supported");
        }
        let mut pts = vec![0.0];
        pts.extend(self.kinks());
        pts.push(c);
        let r = Quad::abs(0.5 * tol).integrate(
            |u| {
                let v = self.eval(u);
                u * v * v
            },
            &pts,
        )?;
        Ok(2.0 * r.value)
    }

    /// Φ(F_T)(s) = ∫ F(x/T) e^{(s-1/2)x} dx for real s, by quadrature.
    pub fn phi_dilated(&self, t_dil: f64, s: f64) -> Result<f64> {
        let c = self.support_halfwidth();
        if !c.is_finite() {
            return domain("phi_dilated: requires compact support");
        }
        let k = s - 0.5;
        let mut pts = vec![-c * t_dil];
        for kink in self.kinks().iter().rev() {
            pts.push(-kink * t_dil);
        }
        pts.push(0.0);
        for kink in self.kinks() {
            pts.push(kink * t_dil);
        }
        pts.push(c * t_dil);
        let r = Quad::default()
            .limit(10_000)
            .integrate(|x| self.eval(x / t_dil) * (k * x).exp(), &pts)?;
        Ok(r.value)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family.has_param() {
            write!(f, "{}:{}", self.family.name(), self.param)
        } else {
            write!(f, "{}", self.family.name())
        }
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    /// Parse `name` or `name:param`, e.g. `triangle`, `falpha:2.6`, `gbeta:2`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => {
                let v: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad test-function parameter '{p}'")))?;
                (n.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        let family = Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Domain(format!("unknown test function '{name}'")))?;
        match (family.has_param(), param) {
            (true, Some(p)) => TestFunction::new(family, p),
            (true, None) => domain(format!("{name} needs a parameter, e.g. {name}:3")),
            (false, _) => TestFunction::new(family, 0.0),
        }
    }
}

fn f_alpha_eval(alpha: f64, ax: f64) -> f64 {
    (1.0 - ax) * (PI * ax).cos() + alpha / PI * (PI * ax).sin()
}

/// cos(t/2)/(π² - t²) with the removable singularity at |t| = π resolved.
fn cos_over_gap(t: f64) -> f64 {
    let eps = t.abs() - PI;
    if eps.abs() < 1.0 {
        sin_half_over(eps) / (2.0 * PI + eps)
    } else {
        (0.5 * t).cos() / (PI * PI - t * t)
    }
}

fn f_alpha_hat(alpha: f64, t: f64) -> f64 {
    let c = 2.0 * PI * cos_over_gap(t);
    ((alpha + 1.0) - (alpha - 1.0) * t * t / (PI * PI)) * c * c
}

fn g_alpha_eval(alpha: f64, ax: f64) -> f64 {
    // (F * H)(x) = ∫ F(y) H(x - y) dy over y in [-1, 1] ∩ [x - 1, x + 1].
    let lo = (ax - 1.0).max(-1.0);
    let hi = (ax + 1.0).min(1.0);
    if hi <= lo {
        return 0.0;
    }
    let mut pts = vec![lo, hi];
    for p in [0.0, ax] {
        if p > lo && p < hi {
            pts.push(p);
        }
    }
    pts.sort_by(f64::total_cmp);
    let integrand = |y: f64| f_alpha_eval(alpha, y.abs()) * (1.0 - (ax - y).abs());
    let v = Quad::abs(GALPHA_TOL * (1.0 + alpha))
        .limit(2000)
        .integrate(integrand, &pts)
        .map(|r| r.value)
        .unwrap_or(f64::NAN);
    PI * PI / (2.0 * (alpha + 2.0)) * v
}

/// `(2β-1) J^β(x)` for x ≥ 0, equivalently `-ĝ_β(x)`.
///
/// On `[0, 2π)` this is
/// `sin(βx)((1 - x/2π)cot(x/2) + 1/π) - (1 - x/2π)cos(βx)`, and zero beyond.
fn j_bracket(beta: f64, x: f64) -> f64 {
    if x >= 2.0 * PI {
        return 0.0;
    }
    let w = 1.0 - x / (2.0 * PI);
    let sb = (beta * x).sin();
    let main = if x < PI {
        // sin(βx)cot(x/2) = 2β sinc(βx) cos(x/2) / sinc(x/2)
        w * 2.0 * beta * sinc(beta * x) * (0.5 * x).cos() / sinc(0.5 * x)
    } else {
        // (1 - x/2π)cot(x/2) = cos(x/2) / (π sinc(ε/2)) with ε = 2π - x
        let eps = 2.0 * PI - x;
        sb * (0.5 * x).cos() / (PI * sinc(0.5 * eps))
    };
    main + sb / PI - w * (beta * x).cos()
}

/// Beurling's minorant B⁻(z) of sgn, through the trigamma closed form.
pub(crate) fn beurling_minorant(z: f64) -> f64 {
    if z < 0.0 {
        let w = -z;
        let s = sinc(PI * w);
        return -beurling_minorant(w) - 2.0 * s * s;
    }
    let s = sinc(PI * z);
    let sp = (PI * z).sin() / PI;
    1.0 + 2.0 * s * s * (z - 1.0) - 2.0 * sp * sp * trigamma_pos(1.0 + z)
}

/// B⁻ for the interval `[-β, β]`: `(B⁻(t+β) + B⁻(β-t))/2`.
pub(crate) fn beurling_minorant_interval(beta: f64, t: f64) -> f64 {
    0.5 * (beurling_minorant(t + beta) + beurling_minorant(beta - t))
}

/// Pointwise g_β(x) from the finite explicit expression, written with sinc
/// factors so that every removable singularity is handled exactly.
fn g_beta_eval(beta: f64, x: f64) -> f64 {
    let b = beta as i64;
    let pole = |c: f64| {
        let u = PI * (x - c);
        sinc(u) * u.sin() / PI
    };
    let mut v = pole(beta) - pole(-beta);
    for n in 1..(2 * b) {
        let s = sinc(PI * (x - beta + n as f64));
        v -= s * s;
    }
    v
}

/// The rational factor R(z) with g_β(x) = sin²(πx) R(x).
fn g_beta_rational(beta: f64, z: Complex64) -> Complex64 {
    let b = beta as i64;
    let mut v = 2.0 * beta / (z * z - beta * beta);
    for n in 1..(2 * b) {
        let d = z - beta + n as f64;
        v -= 1.0 / (d * d);
    }
    v / (PI * PI)
}

/// ∫_X^∞ R(x) e^{iωx} dx by rotating the contour to `X ± iy`.
fn rational_tail(beta: f64, omega: f64, x_cut: f64, q: &Quad) -> Result<Complex64> {
    if omega == 0.0 {
        let r =
            q.integrate_to_infinity(|x| g_beta_rational(beta, Complex64::new(x, 0.0)).re, x_cut)?;
        return Ok(Complex64::new(r.value, 0.0));
    }
    let dir = if omega > 0.0 { 1.0 } else { -1.0 };
    let phase = Complex64::new(0.0, omega * x_cut).exp();
    let eval = |y: f64, part: fn(Complex64) -> f64| {
        let z = Complex64::new(x_cut, dir * y);
        let v = g_beta_rational(beta, z) * Complex64::new(0.0, dir) * (-omega.abs() * y).exp();
        part(v * phase)
    };
    let re = q.integrate_to_infinity(|y| eval(y, |c| c.re), 0.0)?.value;
    let im = q.integrate_to_infinity(|y| eval(y, |c| c.im), 0.0)?.value;
    Ok(Complex64::new(re, im))
}
