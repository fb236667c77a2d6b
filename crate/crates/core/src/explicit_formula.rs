//! Both sides of the explicit formula for Dirichlet L-functions, and its
//! generalization to L-functions of degree m with user-supplied local data.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::archimedean::{i_arch, ArchimedeanQuery};
use crate::characters::Character;
use crate::error::{domain, Error, Result};
use crate::exec::{pairwise_sum, Execution};
use crate::primes::{PrimeTable, Twist, WeightedSumQuery};
use crate::quad::Quad;
use crate::testfuncs::{Family, TestFunction};
use crate::zerofinder::ZeroList;

/// Right-hand side of the explicit formula for one primitive character.
#[derive(Debug, Clone, Serialize)]
pub struct WeilEvaluation {
    pub q: u64,
    pub char_index: usize,
    pub f: TestFunction,
    pub t_dil: f64,
    /// log(q/π).
    pub log_term: f64,
    /// I_χ(F_T).
    pub arch_term: f64,
    /// 2 Σ Re χ(n) F(log n/T) Λ(n)/√n.
    pub prime_term: f64,
    /// log_term - arch_term - prime_term.
    pub rhs: f64,
}

/// Evaluate the right-hand side for a primitive nonprincipal character.
pub fn weil_rhs(
    chi: &Character,
    f: TestFunction,
    t_dil: f64,
    table: &PrimeTable,
) -> Result<WeilEvaluation> {
    weil_rhs_with(chi, f, t_dil, table, Execution::default())
}

/// [`weil_rhs`] with an explicit execution policy for the prime sum.
pub fn weil_rhs_with(
    chi: &Character,
    f: TestFunction,
    t_dil: f64,
    table: &PrimeTable,
    exec: Execution,
) -> Result<WeilEvaluation> {
    if chi.is_principal() || !chi.is_primitive() {
        return domain(format!(
            "weil_rhs needs a primitive nonprincipal character, got index {} mod {} (conductor {})",
            chi.index(),
            chi.modulus(),
            chi.conductor()
        ));
    }
    let q = chi.modulus();
    let log_term = (q as f64 / PI).ln();
    let arch_term = i_arch(&ArchimedeanQuery::new(f, t_dil, chi.parity() as f64)?)?;
    let query = WeightedSumQuery {
        f,
        t_dil,
        twist: Twist::Character(chi),
    };
    let prime_term = 2.0 * table.weighted_sum_with(&query, exec)?;
    Ok(WeilEvaluation {
        q,
        char_index: chi.index(),
        f,
        t_dil,
        log_term,
        arch_term,
        prime_term,
        rhs: log_term - arch_term - prime_term,
    })
}

/// `Σ_γ T·F̂(Tγ)` over the listed ordinates, with multiplicity.
pub fn zero_side(zeros: &ZeroList, f: TestFunction, t_dil: f64) -> f64 {
    let terms: Vec<f64> = zeros
        .zeros
        .iter()
        .map(|z| z.multiplicity as f64 * t_dil * f.fourier(t_dil * z.gamma))
        .collect();
    pairwise_sum(&terms)
}

/// The constant `A` with `|F̂(t)| ≤ A/t²` for all `|t| ≥ u`.
pub fn transform_decay_constant(f: TestFunction, u: f64) -> Result<f64> {
    let v = u * u;
    let pi2 = PI * PI;
    let need_above = |edge: f64| -> Result<()> {
        if u <= edge {
            return domain(format!(
                "decay constant for {f} needs |t| ≥ u > {edge}, got u = {u}"
            ));
        }
        Ok(())
    };
    match f.family() {
        Family::Triangle => Ok(4.0),
        Family::Kernel => {
            need_above(PI)?;
            Ok(8.0 * pi2 * v / ((v - pi2) * (v - pi2)))
        }
        Family::FAlpha => {
            need_above(PI)?;
            let a = f.param();
            Ok(4.0 * pi2 * v * ((a - 1.0) * v / pi2 + (a + 1.0)) / ((v - pi2) * (v - pi2)))
        }
        Family::LTheta => {
            let th = f.param();
            need_above(th)?;
            let d = crate::special::sinc(th) / 2.0 + 0.5;
            Ok(4.0 * v * v / ((v - th * th) * (v - th * th) * d))
        }
        Family::GAlpha => {
            let a = f.param();
            let af = transform_decay_constant(TestFunction::f_alpha(a)?, u)?;
            let ah = transform_decay_constant(TestFunction::triangle(), u)?;
            Ok(pi2 / (2.0 * (a + 2.0)) * af * ah / v)
        }
        Family::GBetaMinorant => {
            if u >= 2.0 * PI {
                Ok(0.0)
            } else {
                domain(format!(
                    "{f} has no decay bound below |t| = 2π, got u = {u}"
                ))
            }
        }
        Family::JBeta => domain(format!("{f} has no implemented quadratic decay bound")),
    }
}

/// The error term of the zero-counting band, `0.22737ℓ + 2log(1+ℓ) - 0.5`.
fn count_error(q: f64, t: f64) -> f64 {
    let ell = (q * (t + 2.0) / (2.0 * PI)).ln();
    0.22737 * ell + 2.0 * (1.0 + ell).ln() - 0.5
}

/// Upper bound on `|Σ_{|γ|>h} T·F̂(Tγ)|` from the zero-counting band.
///
/// With `|F̂(t)| ≤ A/t²` past `hT`, the tail is at most `(A/T) Σ_{|γ|>h} γ^{-2}`,
/// and partial summation against `N(t)` gives
/// `(A/T)[(log(qh/2π)+1)/(πh) + E(h)/h² + 2∫_h^∞ E(t)/t³ dt]`.
pub fn zero_tail_bound(q: u64, f: TestFunction, t_dil: f64, height: f64) -> Result<f64> {
    if !(height >= 1.0) {
        return domain(format!("zero_tail_bound needs height ≥ 1, got {height}"));
    }
    if !(t_dil > 0.0) {
        return domain(format!("zero_tail_bound needs T > 0, got {t_dil}"));
    }
    let qf = q as f64;
    let ell = (qf * (height + 2.0) / (2.0 * PI)).ln();
    if ell <= 1.567 {
        return domain(format!(
            "zero_tail_bound: counting band needs log(q(h+2)/2π) > 1.567, got {ell:.4} (q = {q}, h = {height})"
        ));
    }
    let a = transform_decay_constant(f, height * t_dil)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    let main = ((qf * height / (2.0 * PI)).ln() + 1.0) / (PI * height);
    let boundary = count_error(qf, height) / (height * height);
    let integral = Quad::abs(1e-14)
        .integrate_to_infinity(|t| count_error(qf, t) / (t * t * t), height)?
        .value;
    Ok(a / t_dil * (main + boundary + 2.0 * integral))
}

/// Both sides of the formula for one character and their difference.
#[derive(Debug, Clone, Serialize)]
pub struct Balance {
    pub evaluation: WeilEvaluation,
    pub zero_side: f64,
    pub height: f64,
    /// |rhs - zero_side|.
    pub residual: f64,
    pub tail_bound: f64,
    pub zeros_complete: bool,
}

impl Balance {
    /// The residual is explained by the omitted zeros.
    pub fn holds(&self, slack: f64) -> bool {
        self.residual <= self.tail_bound + slack
    }
}

/// Compare the prime side with the zero side truncated at the list height.
pub fn balance(
    chi: &Character,
    zeros: &ZeroList,
    f: TestFunction,
    t_dil: f64,
    table: &PrimeTable,
) -> Result<Balance> {
    if zeros.modulus != chi.modulus() || zeros.char_index != chi.index() {
        return domain("balance: zero list belongs to a different character");
    }
    let evaluation = weil_rhs(chi, f, t_dil, table)?;
    let zs = zero_side(zeros, f, t_dil);
    let tail_bound = zero_tail_bound(chi.modulus(), f, t_dil, zeros.height)?;
    Ok(Balance {
        residual: (evaluation.rhs - zs).abs(),
        evaluation,
        zero_side: zs,
        height: zeros.height,
        tail_bound,
        zeros_complete: zeros.complete,
    })
}

/// Local coefficients of a general L-function.
pub trait CoefficientSource: Sync {
    /// `Σ_j α_j(p)^k`, or `None` when the data does not cover `p^k`.
    fn power_sum(&self, p: u64, k: u32) -> Option<Complex64>;
}

/// The Dirichlet specialization: `α_1(p)^k = χ(p)^k = χ(p^k)`.
#[derive(Debug, Clone, Copy)]
pub struct DirichletCoefficients<'a>(pub &'a Character);

impl CoefficientSource for DirichletCoefficients<'_> {
    fn power_sum(&self, p: u64, k: u32) -> Option<Complex64> {
        let q = self.0.modulus();
        let mut r = 1u64;
        let base = p % q;
        for _ in 0..k {
            r = r * base % q;
        }
        Some(self.0.eval(r))
    }
}

/// Archimedean and arithmetic data of a degree-m L-function.
#[derive(Clone, Copy)]
pub struct MestreData<'a> {
    /// Conductor N > 0.
    pub conductor: f64,
    /// Spectral parameters μ_j, with Re μ_j > -1.
    pub mu: &'a [Complex64],
    /// Order of the pole at s = 1, at most m.
    pub r_pole: u32,
    /// Bound ϑ in |α_j(p)| ≤ p^ϑ.
    pub theta: f64,
    pub coeffs: &'a dyn CoefficientSource,
}

impl MestreData<'_> {
    /// Degree m.
    pub fn degree(&self) -> usize {
        self.mu.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.conductor > 0.0) {
            return domain(format!(
                "conductor must be positive, got {}",
                self.conductor
            ));
        }
        if self.mu.is_empty() {
            return domain("degree m must be at least 1");
        }
        if let Some(m) = self.mu.iter().find(|m| !(m.re > -1.0)) {
            return domain(format!("spectral parameter {m} has real part ≤ -1"));
        }
        if self.r_pole as usize > self.mu.len() {
            return domain(format!(
                "pole order {} exceeds degree {}",
                self.r_pole,
                self.mu.len()
            ));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return domain(format!("ϑ must lie in [0, 1], got {}", self.theta));
        }
        Ok(())
    }

    /// C(π) = N Π (|μ_j| + 3).
    pub fn analytic_conductor(&self) -> f64 {
        self.conductor * self.mu.iter().map(|m| m.norm() + 3.0).product::<f64>()
    }
}

/// Terms of the general explicit formula.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MestreEvaluation {
    /// log(N/π^m).
    pub log_term: f64,
    /// r (Φ(F_T)(0) + Φ(F_T)(1)).
    pub pole_term: f64,
    /// Σ_j I_j(F_T).
    pub arch_term: f64,
    /// 2 Σ Re(α_j(p)^k) F_T(k log p) log p / p^{k/2}.
    pub prime_term: f64,
    /// Contributions of μ_j with Re μ_j ≤ -1/2.
    pub mu_correction: f64,
    pub rhs: f64,
}

/// `Re[Φ(F_T)(-μ) + Φ(F_T)(1+μ)] = 2∫ F_T(x) cosh(ax) cos(bx) dx`, `μ + 1/2 = a + ib`.
fn phi_pair(f: TestFunction, t_dil: f64, mu: Complex64) -> Result<f64> {
    let c = f.support_halfwidth();
    if !c.is_finite() {
        return domain("Φ(F) needs a compactly supported test function");
    }
    let k = mu + 0.5;
    let edge = c * t_dil;
    // F is even, so integrate over [0, edge] and double twice.
    let r = Quad::default().limit(10_000).integrate(
        |x| f.eval(x / t_dil) * (k.re * x).cosh() * (k.im * x).cos(),
        &[0.0, 0.5 * edge, edge],
    )?;
    Ok(4.0 * r.value)
}

/// Right-hand side of the general explicit formula applied to `F_T`.
pub fn mestre_rhs(
    data: &MestreData<'_>,
    f: TestFunction,
    t_dil: f64,
    table: &PrimeTable,
) -> Result<MestreEvaluation> {
    data.validate()?;
    let m = data.degree() as f64;
    let log_term = (data.conductor / PI.powf(m)).ln();
    let pole_term = if data.r_pole > 0 {
        data.r_pole as f64 * (f.phi_dilated(t_dil, 0.0)? + f.phi_dilated(t_dil, 1.0)?)
    } else {
        0.0
    };
    let mut arch_term = 0.0;
    for mu in data.mu {
        arch_term += i_arch(&ArchimedeanQuery::new(f, t_dil, mu.re)?)?;
    }
    let mut mu_correction = 0.0;
    for mu in data.mu {
        if mu.re < -0.5 {
            mu_correction += phi_pair(f, t_dil, *mu)?;
        } else if mu.re == -0.5 {
            mu_correction += 0.5 * phi_pair(f, t_dil, *mu)?;
        }
    }
    let prime_term = 2.0 * general_prime_sum(data.coeffs, f, t_dil, table)?;
    Ok(MestreEvaluation {
        log_term,
        pole_term,
        arch_term,
        prime_term,
        mu_correction,
        rhs: log_term + pole_term - arch_term - prime_term - mu_correction,
    })
}

fn general_prime_sum(
    coeffs: &dyn CoefficientSource,
    f: TestFunction,
    t_dil: f64,
    table: &PrimeTable,
) -> Result<f64> {
    let c = f.support_halfwidth();
    if !c.is_finite() {
        return domain("prime sum needs a compactly supported test function");
    }
    let x = (c * t_dil).exp();
    if x > table.limit() as f64 {
        return Err(Error::Capacity(format!(
            "prime sum needs primes up to {x:.0}, table reaches {}",
            table.limit()
        )));
    }
    let n_max = x.floor() as u64;
    let ps = &table.primes()[..table.count_up_to(n_max)];
    let mut terms = Vec::with_capacity(ps.len());
    for &p in ps {
        let lp = (p as f64).ln();
        let mut k = 1u32;
        let mut pk = p;
        let mut s = 0.0;
        loop {
            let a = coeffs
                .power_sum(p, k)
                .ok_or_else(|| Error::Data(format!("missing coefficient for p = {p}, k = {k}")))?;
            s += a.re * f.eval(k as f64 * lp / t_dil) * lp / (pk as f64).sqrt();
            match pk.checked_mul(p) {
                Some(next) if next <= n_max => {
                    pk = next;
                    k += 1;
                }
                _ => break,
            }
        }
        terms.push(s);
    }
    Ok(pairwise_sum(&terms))
}

/// Leading terms of the bounds for a general L-function, with
/// `L = log log C(π)^{3/m}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeneralLeadingBounds {
    pub analytic_conductor: f64,
    pub loglog: f64,
    /// (1/2 + ϑ) π / L.
    pub gamma: f64,
    /// (1/2 + ϑ) log C(π) / L.
    pub n_central: f64,
    /// (1 + 2ϑ) π / L.
    pub gamma_tilde: f64,
}

pub fn general_leading_bounds(data: &MestreData<'_>) -> Result<GeneralLeadingBounds> {
    data.validate()?;
    let c = data.analytic_conductor();
    let inner = 3.0 / data.degree() as f64 * c.ln();
    if !(inner > 1.0) {
        return domain(format!(
            "log log C^(3/m) must be positive, got C = {c} with m = {}",
            data.degree()
        ));
    }
    let l = inner.ln();
    Ok(GeneralLeadingBounds {
        analytic_conductor: c,
        loglog: l,
        gamma: (0.5 + data.theta) * PI / l,
        n_central: (0.5 + data.theta) * c.ln() / l,
        gamma_tilde: (1.0 + 2.0 * data.theta) * PI / l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zerofinder::Zero;

    fn list(zeros: Vec<Zero>) -> ZeroList {
        ZeroList {
            modulus: 4,
            char_index: 1,
            parity: 1,
            height: 10.0,
            zeros,
            complete: true,
            central_suspect: false,
            step: 0.1,
        }
    }

    #[test]
    fn zero_side_trivial_cases() {
        let h = TestFunction::triangle();
        assert_eq!(zero_side(&list(Vec::new()), h, 3.0), 0.0);
        let central = list(vec![Zero {
            gamma: 0.0,
            multiplicity: 2,
            residual: 0.0,
        }]);
        assert!((zero_side(&central, h, 3.0) - 6.0).abs() < 1e-15);
    }

    #[test]
    fn decay_constants_dominate_transforms() {
        let u = 8.0;
        for f in [
            TestFunction::triangle(),
            TestFunction::kernel(),
            TestFunction::f_alpha(3.0).unwrap(),
            TestFunction::l_theta(1.5).unwrap(),
            TestFunction::g_alpha(2.0).unwrap(),
        ] {
            let a = transform_decay_constant(f, u).unwrap();
            for i in 0..2000 {
                let t = u + i as f64 * 0.05;
                assert!(
                    f.fourier(t).abs() * t * t <= a * (1.0 + 1e-12),
                    "{f} at {t}"
                );
            }
        }
        assert!(transform_decay_constant(TestFunction::j_beta(2.0).unwrap(), u).is_err());
    }

    #[test]
    fn tail_shrinks_with_height() {
        let h = TestFunction::triangle();
        let mut prev = f64::INFINITY;
        for height in [10.0, 30.0, 60.0, 200.0, 1e4] {
            let b = zero_tail_bound(4, h, 4.0, height).unwrap();
            assert!(b > 0.0 && b < prev);
            prev = b;
        }
        let b60 = zero_tail_bound(4, h, 4.0, 60.0).unwrap();
        assert!(b60 < 0.05, "{b60}");
        assert!(zero_tail_bound(4, TestFunction::kernel(), 4.0, 60.0).unwrap() < b60);
    }

    #[test]
    fn general_bounds_leading_terms() {
        let mu = [Complex64::new(0.0, 0.0)];
        let src = NoCoefficients;
        let data = MestreData {
            conductor: 1e30,
            mu: &mu,
            r_pole: 0,
            theta: 0.0,
            coeffs: &src,
        };
        let b = general_leading_bounds(&data).unwrap();
        let l = (3.0 * (3e30f64).ln()).ln();
        assert!((b.gamma - PI / (2.0 * l)).abs() < 1e-14);
        assert!((b.gamma_tilde - 2.0 * b.gamma).abs() < 1e-14);
    }

    struct NoCoefficients;

    impl CoefficientSource for NoCoefficients {
        fn power_sum(&self, _p: u64, _k: u32) -> Option<Complex64> {
            None
        }
    }
}
