//! Evaluators for the bounds on low-lying zeros, the parameter optimizations
//! behind them and the tabulated proportion curves.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use serde::Serialize;

use crate::archimedean::{
    i_arch, kernel_integral_closed_form, kernel_max_and_integral, ArchimedeanQuery,
};
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::optimize::{find_root, maximize_1d};
use crate::primes::{PrimeTable, Twist, WeightedSumQuery};
use crate::special::EULER_GAMMA;
use crate::testfuncs::TestFunction;

pub use crate::optimize::{minimize_1d, OptimizationResult};

const LN_4: f64 = 2.0 * LN_2;

/// Which statement a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    GammaBound,
    GammaZeroCount,
    CentralOrder,
    NonrealGamma,
    AverageCentralOrder,
    MinGamma,
    MaxGamma,
    EffectiveGamma,
}

impl BoundKind {
    /// Short label used in output headers.
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::GammaBound => "lowest-zero",
            BoundKind::GammaZeroCount => "low-zero-count",
            BoundKind::CentralOrder => "central-order",
            BoundKind::NonrealGamma => "nonreal-zero",
            BoundKind::AverageCentralOrder => "average-central-order",
            BoundKind::MinGamma => "min-lowest-zero",
            BoundKind::MaxGamma => "max-lowest-zero",
            BoundKind::EffectiveGamma => "effective-zero",
        }
    }
}

/// Role of one term in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    Main,
    SecondOrder,
    /// Size of the unspecified error term; never part of `value`.
    ErrorBudget,
    /// Auxiliary quantity (heights, optimal parameters).
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: String,
    pub kind: TermKind,
    pub value: f64,
}

/// One evaluated bound: `value` is the sum of the main and second-order terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub input: BTreeMap<String, f64>,
    pub value: f64,
    pub terms: Vec<Term>,
    /// The input lies in the range where the statement applies.
    pub valid: bool,
}

impl BoundReport {
    fn new(kind: BoundKind, input: &[(&str, f64)], terms: Vec<Term>, valid: bool) -> BoundReport {
        let value = terms
            .iter()
            .filter(|t| matches!(t.kind, TermKind::Main | TermKind::SecondOrder))
            .map(|t| t.value)
            .sum();
        BoundReport {
            kind,
            input: input.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            terms,
            valid,
        }
    }

    /// Value of the named term.
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

fn term(name: &str, kind: TermKind, value: f64) -> Term {
    Term {
        name: name.to_string(),
        kind,
        value,
    }
}

fn loglog(q: f64) -> f64 {
    q.ln().ln()
}

/// `|γ_χ| ≤ π/(2L) + π(log4+1)/(2L²)`, `L = log log q`, valid for `L > 3`.
pub fn lowest_zero_bound(q: f64) -> BoundReport {
    lowest_zero_bound_log(q.ln())
}

/// [`lowest_zero_bound`] from `log q`, for conductors beyond f64 range.
pub fn lowest_zero_bound_log(log_q: f64) -> BoundReport {
    let l = log_q.ln();
    BoundReport::new(
        BoundKind::GammaBound,
        &[("log_q", log_q)],
        vec![
            term("main", TermKind::Main, PI / (2.0 * l)),
            term(
                "second_order",
                TermKind::SecondOrder,
                PI * (LN_4 + 1.0) / (2.0 * l * l),
            ),
            term("error_budget", TermKind::ErrorBudget, l.powi(-3)),
        ],
        l > 3.0,
    )
}

/// The rearranged count coefficient `(π²/4)(1 - 4a e^{-C+1/a})/(2a)`.
pub fn zero_count_objective(a: f64, c: f64) -> f64 {
    PI * PI / 4.0 * (1.0 - 4.0 * a * (-c + 1.0 / a).exp()) / (2.0 * a)
}

/// Number of zeros below `π/(2L) + πC/(2L²)`:
/// at least `(π²/8)(C - log4 - 1) log q / L²`, with the optimal `a = 1/(C - log4)`.
pub fn low_zero_count(q: f64, c: f64) -> BoundReport {
    low_zero_count_log(q.ln(), c)
}

/// [`low_zero_count`] from `log q`.
pub fn low_zero_count_log(log_q: f64, c: f64) -> BoundReport {
    let l = log_q.ln();
    let a = 1.0 / (c - LN_4);
    BoundReport::new(
        BoundKind::GammaZeroCount,
        &[("log_q", log_q), ("C", c)],
        vec![
            term(
                "main",
                TermKind::Main,
                PI * PI / 8.0 * (c - LN_4 - 1.0) * log_q / (l * l),
            ),
            term(
                "height",
                TermKind::Auxiliary,
                PI / (2.0 * l) + PI * c / (2.0 * l * l),
            ),
            term("optimal_a", TermKind::Auxiliary, a),
            term(
                "error_budget",
                TermKind::ErrorBudget,
                log_q / (l * l) * l.recip(),
            ),
        ],
        l > 3.0 && c > LN_4 + 1.0,
    )
}

/// The Δ-dependent coefficient `Δ/4 + 2e^{-Δ/2}` of the central-order bound.
pub fn central_order_delta_objective(delta: f64) -> f64 {
    delta / 4.0 + 2.0 * (-delta / 2.0).exp()
}

/// `n_χ ≤ log q/(2L) + (log4+1) log q/(2L²)`, from `Δ = 2 log 4`.
pub fn central_order_bound(q: f64) -> BoundReport {
    central_order_bound_log(q.ln())
}

/// [`central_order_bound`] from `log q`.
pub fn central_order_bound_log(lq: f64) -> BoundReport {
    let l = lq.ln();
    let delta = 2.0 * LN_4;
    BoundReport::new(
        BoundKind::CentralOrder,
        &[("log_q", lq)],
        vec![
            term("main", TermKind::Main, lq / (2.0 * l)),
            term(
                "second_order",
                TermKind::SecondOrder,
                central_order_delta_objective(delta) * lq / (l * l),
            ),
            term("delta", TermKind::Auxiliary, delta),
            term("error_budget", TermKind::ErrorBudget, lq / l.powi(3)),
        ],
        l > 3.0,
    )
}

/// `|γ̃_χ| ≤ π/L + π(log4+1)/L²`.
pub fn nonreal_zero_bound(q: f64) -> BoundReport {
    nonreal_zero_bound_log(q.ln())
}

/// [`nonreal_zero_bound`] from `log q`.
pub fn nonreal_zero_bound_log(log_q: f64) -> BoundReport {
    let l = log_q.ln();
    BoundReport::new(
        BoundKind::NonrealGamma,
        &[("log_q", log_q)],
        vec![
            term("main", TermKind::Main, PI / l),
            term(
                "second_order",
                TermKind::SecondOrder,
                PI * (LN_4 + 1.0) / (l * l),
            ),
            term("error_budget", TermKind::ErrorBudget, l.powi(-3)),
        ],
        l > 3.0,
    )
}

/// Family statements for modulus q: the average central order, and the
/// minimum and maximum of the normalized lowest zero.
pub fn family_bounds(q: f64) -> Result<Vec<BoundReport>> {
    if !(q > 10.0) {
        return domain(format!("family bounds need q > 10, got {q}"));
    }
    family_bounds_log(q.ln())
}

/// [`family_bounds`] from `log q`.
pub fn family_bounds_log(lq: f64) -> Result<Vec<BoundReport>> {
    if !(lq > 10f64.ln()) {
        return domain(format!("family bounds need q > 10, got log q = {lq}"));
    }
    let l = lq.ln();
    let lll = l.ln();
    Ok(vec![
        BoundReport::new(
            BoundKind::AverageCentralOrder,
            &[("log_q", lq)],
            vec![
                term("main", TermKind::Main, 0.5),
                term("second_order", TermKind::SecondOrder, -l / (2.0 * lq)),
                term("error_budget", TermKind::ErrorBudget, lll.abs() / lq),
            ],
            true,
        ),
        BoundReport::new(
            BoundKind::MinGamma,
            &[("log_q", lq)],
            vec![
                term("main", TermKind::Main, 0.25),
                term("second_order", TermKind::SecondOrder, -l / (4.0 * lq)),
                term("error_budget", TermKind::ErrorBudget, lll.abs() / lq),
            ],
            true,
        ),
        BoundReport::new(
            BoundKind::MaxGamma,
            &[("log_q", lq)],
            vec![
                term("main", TermKind::Main, 0.25),
                term(
                    "second_order",
                    TermKind::SecondOrder,
                    (EULER_GAMMA + (8.0 * PI).ln()) / (4.0 * lq),
                ),
                term("error_budget", TermKind::ErrorBudget, lq.powi(-2)),
            ],
            true,
        ),
    ])
}

/// Both sides of the small-β̃ expansion behind the maximum-height bound:
/// `(8π² (sin(πβ̃/2)/(2π²β̃ + π²β̃²))², (1 - β̃)/2)`.
pub fn max_zero_expansion(beta_tilde: f64) -> (f64, f64) {
    let b = beta_tilde;
    let inner = (PI * b / 2.0).sin() / (2.0 * PI * PI * b + PI * PI * b * b);
    (8.0 * PI * PI * inner * inner, 0.5 * (1.0 - b))
}

/// `f(α) = (6α² + π² - 3)(α + 1)/(12π²(α - 1))`.
pub fn f_objective(alpha: f64) -> f64 {
    (6.0 * alpha * alpha + PI * PI - 3.0) * (alpha + 1.0) / (12.0 * PI * PI * (alpha - 1.0))
}

/// The minimizer of f and derived threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FAlphaConstants {
    pub alpha0: f64,
    pub f_alpha0: f64,
    /// β₀ = √((α₀+1)/(α₀-1))/2.
    pub beta0: f64,
    pub search: OptimizationResult,
}

/// Minimize f over (1, 50].
pub fn falpha_constants() -> Result<FAlphaConstants> {
    let search = minimize_1d(f_objective, 1.01, 50.0, 1e-10)?;
    let a = search.argmin;
    Ok(FAlphaConstants {
        alpha0: a,
        f_alpha0: search.optimum,
        beta0: ((a + 1.0) / (a - 1.0)).sqrt() / 2.0,
        search,
    })
}

fn check_beta_half(beta: f64) -> Result<()> {
    if !(beta > 0.5) || !beta.is_finite() {
        return domain(format!("proportion needs β > 1/2, got {beta}"));
    }
    Ok(())
}

/// The variance ratio in the one-level-density proportion.
fn hr_ratio(beta: f64) -> f64 {
    let b2 = beta * beta;
    let pi2 = PI * PI;
    (3.0 + pi2 + 72.0 * b2 - 8.0 * pi2 * b2 + 48.0 * b2 * b2 + 16.0 * pi2 * b2 * b2)
        / (12.0 * pi2 * (4.0 * b2 - 1.0).powi(2))
}

/// One-level-density lower bound on the proportion, clamped at 0.
pub fn hr_proportion(beta: f64) -> Result<f64> {
    check_beta_half(beta)?;
    Ok((1.0 - hr_ratio(beta)).max(0.0))
}

/// `(11π² - 3)/(12π²)`, the β → ∞ limit of [`hr_proportion`].
pub fn hr_limit() -> f64 {
    (11.0 * PI * PI - 3.0) / (12.0 * PI * PI)
}

/// Cauchy–Schwarz lower bound on the proportion.
pub fn falpha_proportion(beta: f64) -> Result<f64> {
    check_beta_half(beta)?;
    let k = falpha_constants()?;
    let b2 = 4.0 * beta * beta;
    let f = if beta < k.beta0 {
        f_objective((b2 + 1.0) / (b2 - 1.0))
    } else {
        k.f_alpha0
    };
    Ok(1.0 / (1.0 + f / b2))
}

/// The first branch of [`falpha_proportion`] in its one-level-density form.
pub fn falpha_proportion_first_branch(beta: f64) -> Result<f64> {
    check_beta_half(beta)?;
    Ok(1.0 / (1.0 + hr_ratio(beta)))
}

/// Proportion for general moduli, minimizing `f(α)/(4β²) + √f(α)/β`
/// over `α ≥ (4β²+1)/(4β²-1)`.
pub fn general_modulus_proportion(beta: f64) -> Result<f64> {
    check_beta_half(beta)?;
    let b2 = 4.0 * beta * beta;
    let lo = (b2 + 1.0) / (b2 - 1.0);
    let obj = |a: f64| {
        let f = f_objective(a);
        f / b2 + f.sqrt() / beta
    };
    let r = minimize_1d(obj, lo, lo + 100.0, 1e-10)?;
    Ok(1.0 / (1.0 + r.optimum))
}

/// `1 - 1/(1 + sin(4πβ)/(4πβ))` for `β ∈ [0, 1/4]`.
pub fn ltheta_proportion(beta: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&beta) {
        return domain(format!("L^θ proportion needs β ∈ [0, 1/4], got {beta}"));
    }
    let x = 4.0 * PI * beta;
    let s = if x == 0.0 { 1.0 } else { x.sin() / x };
    Ok(1.0 - 1.0 / (1.0 + s))
}

/// `1 - 1/(2 max_θ L̂^θ(4πβ))`, maximized numerically over `θ ∈ [0, π]`.
pub fn ltheta_proportion_numeric(beta: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&beta) {
        return domain(format!("L^θ proportion needs β ∈ [0, 1/4], got {beta}"));
    }
    let t = 4.0 * PI * beta;
    let val = |th: f64| {
        TestFunction::l_theta(th)
            .map(|f| f.fourier(t))
            .unwrap_or(f64::NAN)
    };
    let best = maximize_1d(val, 0.0, PI, 1e-10)?.optimum;
    let sampled = (0..=64)
        .map(|i| val(PI * i as f64 / 64.0))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(1.0 - 1.0 / (2.0 * best.max(sampled)))
}

/// `√((α+1)/(α-1))`.
fn sign_ratio(alpha: f64) -> f64 {
    ((alpha + 1.0) / (alpha - 1.0)).sqrt()
}

/// Smallest β for which both quadratic-family constraints can hold:
/// `π/(2√(π² - 4))`.
pub fn quadratic_boundary() -> f64 {
    PI / (2.0 * (PI * PI - 4.0).sqrt())
}

/// The same boundary found numerically as `min_α max(s(α)(α+1)/π², s(α)/2)`.
pub fn quadratic_boundary_numeric() -> Result<f64> {
    let g = |a: f64| {
        let s = sign_ratio(a);
        (s * (a + 1.0) / (PI * PI)).max(s / 2.0)
    };
    Ok(minimize_1d(g, 1.0001, 20.0, 1e-12)?.optimum)
}

/// Objective of the quadratic-family proportion at α.
pub fn quadratic_objective(alpha: f64, beta: f64) -> f64 {
    let pi2 = PI * PI;
    let r = sign_ratio(alpha) * (alpha + 1.0) / (pi2 * beta);
    let diag = (6.0 * alpha * alpha + pi2 - 3.0) * (alpha + 1.0)
        / (24.0 * pi2 * beta * beta * (alpha - 1.0));
    (1.0 - r).powi(2) / (1.0 - 2.0 * r + diag)
}

fn quadratic_feasible(alpha: f64, beta: f64) -> bool {
    let s = sign_ratio(alpha);
    alpha > 1.0 && s * (alpha + 1.0) < PI * PI * beta && s < 2.0 * beta
}

/// Result of the constrained supremum over α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticProportion {
    pub beta: f64,
    pub value: f64,
    pub alpha: f64,
    /// Feasible α-interval found by the scan.
    pub feasible: (f64, f64),
}

/// Supremum of the quadratic-family ratio over feasible α, clamped at 0.
pub fn quadratic_proportion(beta: f64) -> Result<QuadraticProportion> {
    if !(beta > quadratic_boundary()) || !beta.is_finite() {
        return domain(format!(
            "quadratic proportion needs β > {:.6}, got {beta}",
            quadratic_boundary()
        ));
    }
    // α + 1 < s(α)(α+1) < π²β bounds the search range.
    let hi = PI * PI * beta - 1.0;
    let lo = 1.0;
    const SCAN: usize = 200;
    let xs: Vec<f64> = (1..SCAN)
        .map(|i| lo + (hi - lo) * i as f64 / SCAN as f64)
        .collect();
    let feas: Vec<usize> = (0..xs.len())
        .filter(|&i| quadratic_feasible(xs[i], beta))
        .collect();
    let (a_lo, a_hi) = match (feas.first(), feas.last()) {
        (Some(&i), Some(&j)) => {
            // Widen to the true constraint edges by bisection.
            let left = if i == 0 { lo } else { xs[i - 1] };
            let right = if j + 1 == xs.len() { hi } else { xs[j + 1] };
            (
                edge_bisect(left, xs[i], beta),
                edge_bisect(right, xs[j], beta),
            )
        }
        _ => {
            // Narrow feasible window near the boundary: refine around the
            // minimizer of the binding constraint.
            let g = |a: f64| {
                let s = sign_ratio(a);
                (s * (a + 1.0) / (PI * PI)).max(s / 2.0)
            };
            let m = minimize_1d(g, 1.0001, hi.max(1.001), 1e-13)?;
            if !quadratic_feasible(m.argmin, beta) {
                return domain(format!("no feasible α for β = {beta}"));
            }
            (
                edge_bisect(1.0 + 1e-9, m.argmin, beta),
                edge_bisect(hi, m.argmin, beta),
            )
        }
    };
    let obj = |a: f64| -quadratic_objective(a, beta);
    let r = minimize_1d(obj, a_lo, a_hi, 1e-10)?;
    // Ties go to the smaller α: compare against a dense sample.
    let mut best = (r.argmin, -r.optimum);
    for i in 0..=SCAN {
        let a = a_lo + (a_hi - a_lo) * i as f64 / SCAN as f64;
        let v = quadratic_objective(a, beta);
        if quadratic_feasible(a, beta) && v > best.1 + 1e-12 {
            best = (a, v);
        }
    }
    Ok(QuadraticProportion {
        beta,
        value: best.1.max(0.0),
        alpha: best.0,
        feasible: (a_lo, a_hi),
    })
}

/// Bisect between an infeasible and a feasible α for the constraint edge,
/// returning a feasible point within 1e-12 of it.
fn edge_bisect(mut bad: f64, mut good: f64, beta: f64) -> f64 {
    if quadratic_feasible(bad, beta) {
        return bad;
    }
    for _ in 0..200 {
        let mid = 0.5 * (bad + good);
        if quadratic_feasible(mid, beta) {
            good = mid;
        } else {
            bad = mid;
        }
        if (good - bad).abs() < 1e-13 {
            break;
        }
    }
    good
}

/// Largest β with `K̂(2πβt) ≥ (1/t - 4/π²)/2` at a fixed `t = T/log D`,
/// or 0 when no β qualifies.
pub fn quadratic_beta_at(t_coef: f64) -> f64 {
    let k = TestFunction::kernel();
    let target = (1.0 / t_coef - 4.0 / (PI * PI)) / 2.0;
    if target >= k.fourier(0.0) {
        return 0.0;
    }
    if target <= 0.0 {
        return f64::INFINITY;
    }
    // K̂ decreases on [0, 3π]; solve K̂(u) = target there.
    let u = find_root(|u| k.fourier(u) - target, 0.0, 3.0 * PI, 1e-15).unwrap_or(f64::NAN);
    u / (2.0 * PI * t_coef)
}

/// The maximal β and the `t = T/log D` achieving it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaMax {
    pub beta: f64,
    pub t_coef: f64,
}

/// Maximize [`quadratic_beta_at`] over `t ∈ (0, 1)`.
pub fn quadratic_beta_max() -> Result<BetaMax> {
    let lo = 1.0 / (2.0 + 4.0 / (PI * PI)) + 1e-9;
    let r = maximize_1d(quadratic_beta_at, lo, 1.0, 1e-10)?;
    Ok(BetaMax {
        beta: r.optimum,
        t_coef: r.argmin,
    })
}

/// Exponent λ with some `d ∈ [D - D^λ, D]` having a zero above `2πβ/log D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaExponent {
    pub beta: f64,
    pub lambda: f64,
    /// Smallest admissible `T/log D`.
    pub t_coef: f64,
    /// Best θ for the L^θ test function.
    pub theta: f64,
}

/// Minimum of L̂^θ on `[0, x]`.
fn min_transform_on(f: &TestFunction, x: f64) -> f64 {
    const N: usize = 64;
    (0..=N)
        .map(|i| f.fourier(x * i as f64 / N as f64))
        .fold(f64::INFINITY, f64::min)
}

/// λ(β) = min over θ and admissible t of `min((1+t)/2, 3t/2)`, where t
/// is admissible when `(1/t - L̂^θ(0)/2) < 2 min_{|u| ≤ 2πβt} L̂^θ(u)`.
pub fn lambda_exponent(beta: f64) -> Result<LambdaExponent> {
    if !(0.0..=0.7230).contains(&beta) {
        return domain(format!("λ(β) needs β ∈ [0, 0.723], got {beta}"));
    }
    let mut best: Option<LambdaExponent> = None;
    const THETAS: usize = 64;
    for i in 0..=THETAS {
        let theta = PI * i as f64 / THETAS as f64;
        let f = TestFunction::l_theta(theta)?;
        let f0 = f.fourier(0.0);
        let ok = |t: f64| 1.0 / t - f0 / 2.0 < 2.0 * min_transform_on(&f, 2.0 * PI * beta * t);
        // The slack shrinks in t only through the minimum; scan then bisect.
        let grid: Vec<f64> = (1..=1000).map(|k| k as f64 / 1000.0).collect();
        let Some(pos) = grid.iter().position(|&t| ok(t)) else {
            continue;
        };
        let (mut bad, mut good) = (if pos == 0 { 1e-9 } else { grid[pos - 1] }, grid[pos]);
        for _ in 0..60 {
            let mid = 0.5 * (bad + good);
            if ok(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        let lambda = ((1.0 + good) / 2.0).min(1.5 * good);
        if best.is_none_or(|b| lambda < b.lambda) {
            best = Some(LambdaExponent {
                beta,
                lambda,
                t_coef: good,
                theta,
            });
        }
    }
    best.ok_or_else(|| Error::Domain(format!("no admissible T/log D for β = {beta}")))
}

/// Upper bound on the normalized lowest zero over `d ∈ [D - D^a, D]`.
pub fn interval_min_bound(a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return domain(format!("interval bound needs 0 < a ≤ 1, got {a}"));
    }
    let (lead, x) = if a <= 0.75 {
        (3.0 / (4.0 * a), 3.0 * PI * PI / (4.0 * a))
    } else {
        (1.0 / (4.0 * a - 2.0), PI * PI / (4.0 * a - 2.0))
    };
    Ok(lead * (x / (x - 2.0)).sqrt())
}

/// Outcome of the threshold search for `|γ_χ| ≤ t₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveThreshold {
    pub t0: f64,
    pub alpha: f64,
    /// max over the T-grid of `max_δ I_δ(F_T) + 2Σ F_T(log n)Λ(n)/√n`.
    pub c: f64,
    /// π e^C.
    pub q0: f64,
    pub argmax_t: f64,
    pub argmax_delta: u8,
    /// T'' = √((α+1)/(α-1)) π / t₀, the end of the grid.
    pub t_max: f64,
    pub argmax_at_edge: bool,
    pub arch_at_max: f64,
    pub prime_at_max: f64,
}

/// Grid step of the threshold search.
pub const EFFECTIVE_STEP: f64 = 1e-3;

fn effective_objective(f: TestFunction, t: f64, table: &PrimeTable) -> Result<(f64, u8, f64, f64)> {
    let i0 = i_arch(&ArchimedeanQuery::new(f, t, 0.0)?)?;
    let i1 = i_arch(&ArchimedeanQuery::new(f, t, 1.0)?)?;
    let (arch, delta) = if i0 >= i1 { (i0, 0) } else { (i1, 1) };
    let q = WeightedSumQuery {
        f,
        t_dil: t,
        twist: Twist::None,
    };
    let prime = 2.0 * table.weighted_sum_with(&q, Execution::Sequential)?;
    Ok((arch + prime, delta, arch, prime))
}

/// Smallest conductor beyond which the positivity argument forces `|γ_χ| ≤ t₀`.
pub fn effective_q0(t0: f64, alpha: f64, table: &PrimeTable) -> Result<EffectiveThreshold> {
    effective_q0_with(t0, alpha, table, Execution::default())
}

/// [`effective_q0`] with an explicit execution policy over the T-grid.
pub fn effective_q0_with(
    t0: f64,
    alpha: f64,
    table: &PrimeTable,
    exec: Execution,
) -> Result<EffectiveThreshold> {
    if !(t0 > 0.0) {
        return domain(format!("effective_q0 needs t0 > 0, got {t0}"));
    }
    let f = TestFunction::f_alpha(alpha)?;
    let t_max = sign_ratio(alpha) * PI / t0;
    if t_max.exp() > table.limit() as f64 {
        return Err(Error::Capacity(format!(
            "effective_q0 needs primes up to e^{t_max:.4} = {:.0}, table reaches {}",
            t_max.exp(),
            table.limit()
        )));
    }
    let n = (t_max / EFFECTIVE_STEP).floor() as usize;
    let mut grid: Vec<f64> = (1..=n).map(|i| i as f64 * EFFECTIVE_STEP).collect();
    if t_max - grid.last().copied().unwrap_or(0.0) > 1e-12 {
        grid.push(t_max);
    }
    let vals: Vec<Result<(f64, u8, f64, f64)>> =
        exec.map(&grid, |&t| effective_objective(f, t, table));
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut evaluated = Vec::with_capacity(vals.len());
    for (i, v) in vals.into_iter().enumerate() {
        let v = v?;
        if v.0 > best.1 {
            best = (i, v.0);
        }
        evaluated.push(v);
    }
    // Refine ×10 around the grid argmax.
    let centre = grid[best.0];
    let fine: Vec<f64> = (-10..=10)
        .map(|k| centre + k as f64 * EFFECTIVE_STEP / 10.0)
        .filter(|&t| t > 0.0 && t <= t_max)
        .collect();
    let fine_vals: Vec<Result<(f64, u8, f64, f64)>> =
        exec.map(&fine, |&t| effective_objective(f, t, table));
    let mut top = (centre, evaluated[best.0]);
    for (t, v) in fine.iter().zip(fine_vals) {
        let v = v?;
        if v.0 > top.1 .0 {
            top = (*t, v);
        }
    }
    let (t_arg, (c, delta, arch, prime)) = top;
    Ok(EffectiveThreshold {
        t0,
        alpha,
        c,
        q0: PI * c.exp(),
        argmax_t: t_arg,
        argmax_delta: delta,
        t_max,
        argmax_at_edge: t_max - t_arg < 2.0 * EFFECTIVE_STEP,
        arch_at_max: arch,
        prime_at_max: prime,
    })
}

/// `|γ_χ| ≤ (π/2)/(L - 1.43) √(L/(L - 2))`, valid for `q ≥ 10²⁴`.
pub fn effective_zero_bound(q: f64) -> BoundReport {
    effective_zero_bound_log(q.ln())
}

/// [`effective_zero_bound`] from `log q`.
pub fn effective_zero_bound_log(log_q: f64) -> BoundReport {
    let l = log_q.ln();
    BoundReport::new(
        BoundKind::EffectiveGamma,
        &[("log_q", log_q)],
        vec![term(
            "main",
            TermKind::Main,
            PI / 2.0 / (l - 1.43) * (l / (l - 2.0)).sqrt(),
        )],
        log_q >= 24.0 * std::f64::consts::LN_10,
    )
}

/// Recomputed constants of the explicit bound and its proof chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveConstants {
    /// max of x e^{-x/4}/(1-e^{-x}); stated as 1.504 / 1.505.
    pub kernel_max: f64,
    /// ∫_0^∞ x e^{-x/4}/(1-e^{-x}) dx; stated as 17.197.
    pub kernel_integral: f64,
    /// Half of the integral; stated as 8.599.
    pub kernel_half: f64,
    /// γ + 3 log 2 + π/2; stated as 4.228.
    pub gauss: f64,
    /// Chebyshev constant in ψ(x) < 1.039x.
    pub psi_const: f64,
    /// 4 × 1.039; stated as 4.156.
    pub four_psi: f64,
    /// 2 × 1.039; stated as 2.078.
    pub two_psi: f64,
    /// 2.078 - 1.505; stated as 0.573.
    pub slope: f64,
    /// log π + 4.228; stated as 5.373.
    pub offset: f64,
}

pub fn effective_constants() -> Result<EffectiveConstants> {
    let (kernel_max, kernel_integral) = kernel_max_and_integral()?;
    let psi_const = 1.039;
    Ok(EffectiveConstants {
        kernel_max,
        kernel_integral,
        kernel_half: kernel_integral / 2.0,
        gauss: EULER_GAMMA + 3.0 * LN_2 + PI / 2.0,
        psi_const,
        four_psi: 4.0 * psi_const,
        two_psi: 2.0 * psi_const,
        slope: 2.0 * psi_const - 1.505,
        offset: PI.ln() + 4.228,
    })
}

/// One point of the proof chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveChainPoint {
    pub loglog_q: f64,
    /// f(q) = (log q + 0.573(α-1) - 5.373)/(4.156(α-1)), α = L - 1.
    pub f_q: f64,
    /// log f + loglog f + log(1 + loglog f/log f).
    pub half_t_lower: f64,
    /// Exact root x ≥ 1 of e^x/x = f(q).
    pub half_t_exact: f64,
    pub holds: bool,
}

/// Evaluate the chain `T/2 ≥ L - 1.43` at `L = log log q`.
pub fn effective_chain(l: f64) -> Result<EffectiveChainPoint> {
    let alpha = l - 1.0;
    let log_q = l.exp();
    let f_q = (log_q + 0.573 * (alpha - 1.0) - 5.373) / (4.156 * (alpha - 1.0));
    if !(f_q > std::f64::consts::E) {
        return domain(format!("chain undefined at L = {l}: f(q) = {f_q}"));
    }
    let lf = f_q.ln();
    let half_t_lower = lf + lf.ln() + (1.0 + lf.ln() / lf).ln();
    // e^x/x is increasing for x > 1.
    let mut hi = 2.0 * lf + 2.0;
    while hi.exp() / hi < f_q {
        hi *= 2.0;
    }
    let half_t_exact = find_root(|x: f64| x - x.ln() - lf, 1.0, hi, 1e-13)?;
    Ok(EffectiveChainPoint {
        loglog_q: l,
        f_q,
        half_t_lower,
        half_t_exact,
        holds: half_t_lower <= half_t_exact + 1e-12 && half_t_lower >= l - 1.43,
    })
}

/// Verify the stated constants and the chain on a log log q grid from
/// log log 10²⁴ to 100.
pub fn effective_verify() -> Result<bool> {
    let k = effective_constants()?;
    let constants_ok = k.kernel_max <= 1.505
        && (k.kernel_max - 1.504).abs() < 1e-3
        && (k.kernel_integral - 17.197).abs() < 1e-3
        && (k.kernel_integral - kernel_integral_closed_form()).abs() < 1e-8
        && k.kernel_half <= 8.599
        && k.gauss <= 4.228
        && (k.four_psi - 4.156).abs() < 1e-12
        && (k.two_psi - 2.078).abs() < 1e-12
        && (k.slope - 0.573).abs() < 1e-12
        && k.offset <= 5.373
        && (k.offset - 5.373).abs() < 1e-3;
    if !constants_ok {
        return Ok(false);
    }
    let l0 = loglog(1e24);
    let steps = 2000;
    for i in 0..=steps {
        let l = l0 + (100.0 - l0) * i as f64 / steps as f64;
        if !effective_chain(l)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lower bound on T from `aT + b e^T/T³ ≥ c`, `T ≥ 3`:
/// `min{c/((1+Δ)a), log X + 3 loglog X}` with `X = Δc/((1+Δ)b)`.
/// Returns -∞ when `X ≤ 1`, where no bound can be certified.
pub fn helper_t_lower(a: f64, b: f64, c: f64, delta: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0 && delta > 0.0) {
        return domain(format!(
            "helper bound needs positive a, b, c, Δ, got ({a}, {b}, {c}, {delta})"
        ));
    }
    let first = c / ((1.0 + delta) * a);
    let x = delta * c / ((1.0 + delta) * b);
    if x <= 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let lx = x.ln();
    let second = lx + 3.0 * lx.ln();
    Ok(first.min(second))
}

/// Which proportion figure to tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// β, one-level-density bound, Cauchy–Schwarz bound.
    Fig1,
    /// β, quadratic-family bound.
    Fig2,
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Figure> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            _ => Err(Error::Domain(format!(
                "unknown figure {s:?}, expected fig1 or fig2"
            ))),
        }
    }
}

/// Inclusive grid `lo, lo+step, …, hi`, parsed from `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Range> {
        if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return domain(format!("bad range {lo}:{hi}:{step}"));
        }
        Ok(Range { lo, hi, step })
    }

    /// Grid points; `hi` is included when within 1e-12 of a step.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-12).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl std::str::FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Range> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad number {p:?} in range {s:?}")))
        };
        match parts.as_slice() {
            [lo, hi, step] => Range::new(parse(lo)?, parse(hi)?, parse(step)?),
            [x] => {
                let x = parse(x)?;
                Range::new(x, x, 1.0)
            }
            _ => domain(format!("range {s:?} must look like lo:hi:step")),
        }
    }
}

/// A numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// CSV with a header row and 10 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.9e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// JSON array of row objects keyed by column name.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), serde_json::json!(v)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Tabulate a proportion figure on the β-grid.
pub fn figure_data(which: Figure, grid: &Range, exec: Execution) -> Result<Table> {
    let betas = grid.points();
    match which {
        Figure::Fig1 => {
            let rows: Result<Vec<Vec<f64>>> = exec
                .map(&betas, |&b| {
                    Ok(vec![b, hr_proportion(b)?, falpha_proportion(b)?])
                })
                .into_iter()
                .collect();
            Ok(Table {
                columns: vec![
                    "beta".into(),
                    "hr_proportion".into(),
                    "falpha_proportion".into(),
                ],
                rows: rows?,
            })
        }
        Figure::Fig2 => {
            let rows: Result<Vec<Vec<f64>>> = exec
                .map(&betas, |&b| Ok(vec![b, quadratic_proportion(b)?.value]))
                .into_iter()
                .collect();
            Ok(Table {
                columns: vec!["beta".into(), "quadratic_proportion".into()],
                rows: rows?,
            })
        }
    }
}
