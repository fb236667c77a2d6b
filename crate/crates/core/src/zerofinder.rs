//! Critical-line zeros of Dirichlet L-functions of small conductor.
//!
//! `L(1/2+it, χ)` is evaluated as a direct sum over `n < Nq` plus an
//! Euler–Maclaurin tail per residue class. The completed function is rotated
//! to the real Hardy-type function `Z(t)`, whose sign changes are located on
//! a grid and refined with Brent's method.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::characters::{Character, CharacterTable};
use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::optimize::{find_root_with, minimize_1d};
use crate::special::{ln_gamma_right, BERNOULLI_EVEN};

/// Largest modulus handled by the zero finder.
pub const MAX_ZERO_MODULUS: u64 = 500;

/// Largest height handled by the zero finder.
pub const MAX_HEIGHT: f64 = 200.0;

/// Required absolute accuracy of `L(1/2+it)`.
pub const L_ACCURACY: f64 = 1e-8;

/// Tolerance on zero ordinates.
pub const ZERO_TOL: f64 = 1e-10;

/// Below this `|L(1/2)|` a central zero is suspected.
pub const CENTRAL_THRESHOLD: f64 = 1e-8;

/// Number of Bernoulli correction terms in the tail.
const EM_TERMS: usize = 14;

/// Grid oversampling relative to the mean zero spacing.
const OVERSAMPLING: f64 = 8.0;

/// Shared per-modulus machinery for `Σ_n a_n n^{-1/2-it}`.
#[derive(Debug, Clone)]
struct Engine {
    q: u64,
    ln_n: Vec<f64>,
    inv_sqrt_n: Vec<f64>,
    /// `B_{2j}/(2j)!`.
    em_coef: [f64; EM_TERMS + 1],
}

impl Engine {
    fn new(q: u64, height: f64) -> Engine {
        let cap = ((Self::block_count(height) + 1) * q + 1) as usize;
        let mut ln_n = Vec::with_capacity(cap);
        let mut inv_sqrt_n = Vec::with_capacity(cap);
        ln_n.push(0.0);
        inv_sqrt_n.push(0.0);
        for n in 1..cap {
            let x = n as f64;
            ln_n.push(x.ln());
            inv_sqrt_n.push(1.0 / x.sqrt());
        }
        let mut em_coef = [0.0; EM_TERMS + 1];
        let mut fact = 1.0;
        for j in 1..=EM_TERMS + 1 {
            fact *= ((2 * j - 1) * (2 * j)) as f64;
            em_coef[j - 1] = BERNOULLI_EVEN[j - 1] / fact;
        }
        Engine {
            q,
            ln_n,
            inv_sqrt_n,
            em_coef,
        }
    }

    /// Number of complete blocks of q terms summed directly at height t.
    fn block_count(t: f64) -> u64 {
        (0.45 * t.abs()).ceil() as u64 + 10
    }

    /// Rising factorials `(s)_{2j-1}`, `j = 1..=EM_TERMS+1`, at `s = 1/2+it`.
    fn rising(t: f64) -> [Complex64; EM_TERMS + 1] {
        let s = Complex64::new(0.5, t);
        let mut rising = [Complex64::new(0.0, 0.0); EM_TERMS + 1];
        rising[0] = s;
        for j in 1..=EM_TERMS {
            let k = (2 * j - 1) as f64;
            rising[j] = rising[j - 1] * (s + k) * (s + k + 1.0);
        }
        rising
    }

    /// Euler–Maclaurin tail `Σ_{k≥N} (kq+a)^{-s}` with its truncation estimate.
    fn tail(&self, t: f64, a: usize, rising: &[Complex64; EM_TERMS + 1]) -> (Complex64, f64) {
        let s = Complex64::new(0.5, t);
        let q = self.q as f64;
        let u = (Self::block_count(t) * self.q + a as u64) as f64;
        let u_s = (-s * u.ln()).exp();
        let x = q / u;
        let x2 = x * x;
        let mut series = u / (q * (s - 1.0)) + 0.5;
        let mut xp = x;
        for (c, r) in self.em_coef.iter().zip(rising).take(EM_TERMS) {
            series += c * r * xp;
            xp *= x2;
        }
        let next = (self.em_coef[EM_TERMS] * rising[EM_TERMS] * xp).norm() * u_s.norm();
        (u_s * series, next)
    }

    /// Residue-class sums `S_a(1/2+it) = Σ_{n ≡ a} n^{-s}` (continued),
    /// for every `a` in `0..q`, with the largest truncation estimate.
    fn residue_sums(&self, t: f64, coprime: &[bool]) -> (Vec<Complex64>, f64) {
        let q = self.q as usize;
        let nb = Self::block_count(t) as usize;
        let mut sums = vec![Complex64::new(0.0, 0.0); q];
        for n in 1..nb * q {
            let a = n % q;
            if !coprime[a] {
                continue;
            }
            let (sn, cs) = (t * self.ln_n[n]).sin_cos();
            sums[a] += Complex64::new(cs, -sn) * self.inv_sqrt_n[n];
        }
        let rising = Self::rising(t);
        let mut err = 0.0f64;
        for a in 0..q {
            if coprime[a] {
                let (tail, e) = self.tail(t, a, &rising);
                sums[a] += tail;
                err = err.max(e);
            }
        }
        (sums, err)
    }

    /// `Σ_n χ(n) n^{-1/2-it}` (continued) for character values `values`.
    fn l_value(&self, t: f64, values: &[Complex64]) -> (Complex64, f64) {
        let q = self.q as usize;
        let nb = Self::block_count(t) as usize;
        let mut direct = Complex64::new(0.0, 0.0);
        for n in 1..nb * q {
            let c = values[n % q];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (sn, cs) = (t * self.ln_n[n]).sin_cos();
            direct += c * Complex64::new(cs, -sn) * self.inv_sqrt_n[n];
        }
        let rising = Self::rising(t);
        let mut err = 0.0;
        for (a, c) in values.iter().enumerate() {
            if *c != Complex64::new(0.0, 0.0) {
                let (tail, e) = self.tail(t, a, &rising);
                direct += c * tail;
                err += e * c.norm();
            }
        }
        (direct, err)
    }
}

/// Everything needed to evaluate `Z(t)` for one primitive character.
#[derive(Debug, Clone)]
pub struct HardyEvaluator {
    chi: Character,
    values: Vec<Complex64>,
    delta: u8,
    root_number: Complex64,
    rotation: Complex64,
    engine: Engine,
    height: f64,
}

impl HardyEvaluator {
    /// Prepare an evaluator valid for `|t| ≤ height`.
    pub fn new(chi: &Character, height: f64) -> Result<Self> {
        let q = chi.modulus();
        if !chi.is_primitive() {
            return domain(format!(
                "zero finder needs a primitive character (mod {q}, conductor {})",
                chi.conductor()
            ));
        }
        if q > MAX_ZERO_MODULUS {
            return Err(Error::Capacity(format!(
                "zero finder supports q ≤ {MAX_ZERO_MODULUS}, got {q}"
            )));
        }
        if !(height >= 0.0) || height > MAX_HEIGHT {
            return Err(Error::Capacity(format!(
                "zero finder supports heights in [0, {MAX_HEIGHT}], got {height}"
            )));
        }
        let values = chi.values();
        let tau: Complex64 = values
            .iter()
            .enumerate()
            .map(|(a, v)| v * Complex64::from_polar(1.0, 2.0 * PI * a as f64 / q as f64))
            .sum();
        let delta = chi.parity();
        let i_delta = if delta == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        let root_number = tau / (i_delta * (q as f64).sqrt());
        if (root_number.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Precision {
                achieved: (root_number.norm() - 1.0).abs(),
                required: 1e-10,
            });
        }
        let rotation = Complex64::from_polar(1.0, -0.5 * root_number.arg());
        Ok(HardyEvaluator {
            chi: chi.clone(),
            values,
            delta,
            root_number,
            rotation,
            engine: Engine::new(q, height.max(1.0)),
            height: height.max(1.0),
        })
    }

    pub fn character(&self) -> &Character {
        &self.chi
    }

    /// The root number ε(χ) = τ(χ)/(i^δ √q).
    pub fn root_number(&self) -> Complex64 {
        self.root_number
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if t.abs() > self.height + 1e-9 {
            return Err(Error::Capacity(format!(
                "t = {t} exceeds the evaluator height {}",
                self.height
            )));
        }
        Ok(())
    }

    /// `L(1/2 + it, χ)` with its truncation error estimate.
    pub fn l_value(&self, t: f64) -> Result<(Complex64, f64)> {
        self.check_t(t)?;
        let (v, err) = self.engine.l_value(t, &self.values);
        if err > L_ACCURACY {
            return Err(Error::Precision {
                achieved: err,
                required: L_ACCURACY,
            });
        }
        Ok((v, err))
    }

    /// θ(t) = (t/2) log(q/π) + Im log Γ((1/2 + δ + it)/2).
    pub fn theta(&self, t: f64) -> f64 {
        let q = self.chi.modulus() as f64;
        let z = Complex64::new(0.25 + 0.5 * self.delta as f64, 0.5 * t);
        0.5 * t * (q / PI).ln() + ln_gamma_right(z).im
    }

    fn rotate(&self, t: f64, l: Complex64) -> Complex64 {
        self.rotation * Complex64::from_polar(1.0, self.theta(t)) * l
    }

    /// The rotated completed value; its imaginary part is a consistency residual.
    pub fn hardy_z_complex(&self, t: f64) -> Result<Complex64> {
        let (l, _) = self.l_value(t)?;
        Ok(self.rotate(t, l))
    }

    /// Z(t), real and vanishing exactly at critical-line zeros.
    pub fn hardy_z(&self, t: f64) -> Result<f64> {
        self.hardy_z_complex(t).map(|z| z.re)
    }
}

/// `L(1/2 + it, χ)` for a primitive character.
pub fn l_on_critical_line(chi: &Character, t: f64) -> Result<Complex64> {
    HardyEvaluator::new(chi, t.abs())?.l_value(t).map(|v| v.0)
}

/// Free-function form of [`HardyEvaluator::hardy_z`].
pub fn hardy_z(ev: &HardyEvaluator, t: f64) -> Result<f64> {
    ev.hardy_z(t)
}

/// One refined zero ordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zero {
    pub gamma: f64,
    pub multiplicity: u32,
    /// `|Z(γ)|` at the refined ordinate.
    pub residual: f64,
}

/// Zeros of one `L(s, χ)` with `|γ| ≤ height`, sorted by γ.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroList {
    pub modulus: u64,
    pub char_index: usize,
    pub parity: u8,
    pub height: f64,
    pub zeros: Vec<Zero>,
    /// Count agrees with the zero-counting band and no near-miss was left unresolved.
    pub complete: bool,
    /// `|L(1/2, χ)|` fell below [`CENTRAL_THRESHOLD`].
    pub central_suspect: bool,
    /// Grid step of the final scan.
    pub step: f64,
}

impl ZeroList {
    /// Zeros counted with multiplicity.
    pub fn count(&self) -> u32 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    /// Zeros with `|γ| ≤ t`, counted with multiplicity.
    pub fn count_up_to(&self, t: f64) -> u32 {
        self.zeros
            .iter()
            .filter(|z| z.gamma.abs() <= t)
            .map(|z| z.multiplicity)
            .sum()
    }

    /// Ordinates with multiplicity expanded.
    pub fn ordinates(&self) -> Vec<f64> {
        self.zeros
            .iter()
            .flat_map(|z| std::iter::repeat_n(z.gamma, z.multiplicity as usize))
            .collect()
    }

    /// CSV with columns `q,char_index,gamma,refined_residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,char_index,gamma,refined_residual\n");
        for z in &self.zeros {
            for _ in 0..z.multiplicity {
                let _ = writeln!(
                    out,
                    "{},{},{:.12},{:.3e}",
                    self.modulus, self.char_index, z.gamma, z.residual
                );
            }
        }
        out
    }
}

/// Main term and error of the zero-counting band:
/// `N(t) = (t/π) log(qt/2πe) - χ(-1)/4 ± (0.22737ℓ + 2log(1+ℓ) - 0.5)`,
/// `ℓ = log(q(t+2)/2π)`. The third component says whether the band's
/// hypotheses (t ≥ 5/7, ℓ > 1.567) hold.
pub fn zero_count_band(q: u64, t: f64, parity: u8) -> (f64, f64, bool) {
    let qf = q as f64;
    let chi_minus_one = if parity == 0 { 1.0 } else { -1.0 };
    let main = t / PI * (qf * t / (2.0 * PI * std::f64::consts::E)).ln() - chi_minus_one / 4.0;
    let ell = (qf * (t + 2.0) / (2.0 * PI)).ln();
    let err = 0.22737 * ell + 2.0 * (1.0 + ell).ln() - 0.5;
    (main, err, t >= 5.0 / 7.0 && ell > 1.567)
}

fn grid_step(q: u64, height: f64) -> f64 {
    2.0 * PI / (OVERSAMPLING * ((q as f64) * (height + 2.0)).ln())
}

/// Scan range: `[0, h]` for real characters (zeros are symmetric), else `[-h, h]`.
fn scan_grid(real: bool, height: f64, step: f64) -> Vec<f64> {
    let lo = if real { 0.0 } else { -height };
    let n = ((height - lo) / step).ceil() as usize;
    let h = (height - lo) / n as f64;
    (0..=n).map(|i| lo + h * i as f64).collect()
}

/// Sign changes and unresolved same-sign dips from grid values.
fn refine_grid(ev: &HardyEvaluator, grid: &[f64], z: &[f64]) -> Result<(Vec<Zero>, bool)> {
    let mut zeros = Vec::new();
    let mut resolved = true;
    let mut f = |t: f64| ev.hardy_z(t).unwrap_or(f64::NAN);
    for i in 0..grid.len() - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        let (fa, fb) = (z[i], z[i + 1]);
        if fa == 0.0 {
            if a != 0.0 {
                zeros.push(Zero {
                    gamma: a,
                    multiplicity: 1,
                    residual: 0.0,
                });
            }
            continue;
        }
        if fa * fb < 0.0 {
            let g = find_root_with(&mut f, a, fa, b, fb, ZERO_TOL)?;
            zeros.push(Zero {
                gamma: g,
                multiplicity: 1,
                residual: f(g).abs(),
            });
        }
    }
    // A local minimum of |Z| without a sign change may hide a close pair.
    for i in 1..grid.len() - 1 {
        let (l, m, r) = (z[i - 1], z[i], z[i + 1]);
        if l * m <= 0.0 || m * r <= 0.0 || !(m.abs() < l.abs() && m.abs() < r.abs()) {
            continue;
        }
        let sign = m.signum();
        let (a, b) = (grid[i - 1], grid[i + 1]);
        let opt = minimize_1d(|t| sign * ev.hardy_z(t).unwrap_or(f64::NAN), a, b, 1e-9)?;
        if opt.optimum < 0.0 {
            let c = opt.argmin;
            let fc = sign * opt.optimum;
            let g1 = find_root_with(&mut f, a, l, c, fc, ZERO_TOL)?;
            let g2 = find_root_with(&mut f, c, fc, b, r, ZERO_TOL)?;
            for g in [g1, g2] {
                zeros.push(Zero {
                    gamma: g,
                    multiplicity: 1,
                    residual: f(g).abs(),
                });
            }
        } else if opt.optimum < 1e-6 {
            resolved = false;
        }
    }
    zeros.sort_by(|x, y| x.gamma.total_cmp(&y.gamma));
    zeros.dedup_by(|x, y| (x.gamma - y.gamma).abs() < 1e-8);
    Ok((zeros, resolved))
}

fn assemble(
    ev: &HardyEvaluator,
    grid: &[f64],
    z: &[f64],
    height: f64,
    step: f64,
) -> Result<ZeroList> {
    let chi = ev.character();
    let real = chi.is_real();
    let (mut zeros, resolved) = refine_grid(ev, grid, z)?;
    let (l0, _) = ev.l_value(0.0)?;
    let central_suspect = l0.norm() < CENTRAL_THRESHOLD;
    zeros.retain(|zz| zz.gamma.abs() > 1e-7);
    if real {
        let mirrored: Vec<Zero> = zeros
            .iter()
            .map(|zz| Zero {
                gamma: -zz.gamma,
                ..*zz
            })
            .collect();
        zeros.extend(mirrored);
    }
    if central_suspect {
        // Real characters have root number 1, so the central order is even.
        zeros.push(Zero {
            gamma: 0.0,
            multiplicity: if real { 2 } else { 1 },
            residual: l0.norm(),
        });
    }
    zeros.retain(|zz| zz.gamma.abs() <= height);
    zeros.sort_by(|x, y| x.gamma.total_cmp(&y.gamma));
    let count: u32 = zeros.iter().map(|zz| zz.multiplicity).sum();
    let (main, err, _) = zero_count_band(chi.modulus(), height, chi.parity());
    let in_band = (count as f64 - main).abs() <= err;
    Ok(ZeroList {
        modulus: chi.modulus(),
        char_index: chi.index(),
        parity: chi.parity(),
        height,
        zeros,
        complete: in_band && resolved,
        central_suspect,
        step,
    })
}

/// Zeros of `L(s, χ)` with `|γ| ≤ height`.
pub fn find_zeros(chi: &Character, height: f64) -> Result<ZeroList> {
    find_zeros_with(chi, height, Execution::default())
}

/// [`find_zeros`] with an explicit execution policy for the grid scan.
pub fn find_zeros_with(chi: &Character, height: f64, exec: Execution) -> Result<ZeroList> {
    let ev = HardyEvaluator::new(chi, height)?;
    let mut step = grid_step(chi.modulus(), height);
    let mut result = None;
    for _attempt in 0..2 {
        let grid = scan_grid(chi.is_real(), height, step);
        let z: Result<Vec<f64>> = exec.map(&grid, |&t| ev.hardy_z(t)).into_iter().collect();
        let list = assemble(&ev, &grid, &z?, height, step)?;
        let done = list.complete;
        result = Some(list);
        if done {
            break;
        }
        step *= 0.5;
    }
    Ok(result.expect("at least one scan ran"))
}

/// Zeros for every primitive character of the table, sharing the grid
/// evaluation across characters of the same modulus. Complex characters are
/// paired with their conjugates, whose zeros are the mirror images.
pub fn find_zeros_for_modulus(
    table: &CharacterTable,
    height: f64,
    exec: Execution,
) -> Result<Vec<ZeroList>> {
    let q = table.modulus();
    let prims: Vec<&Character> = table.primitive().collect();
    if prims.is_empty() {
        return Ok(Vec::new());
    }
    if q > MAX_ZERO_MODULUS {
        return Err(Error::Capacity(format!(
            "zero finder supports q ≤ {MAX_ZERO_MODULUS}, got {q}"
        )));
    }
    // Representatives: real characters, and one of each conjugate pair.
    let mut reps: Vec<&Character> = Vec::new();
    for c in &prims {
        if c.is_real() || table.conjugate(c).index() > c.index() {
            reps.push(c);
        }
    }
    let evaluators: Vec<HardyEvaluator> = reps
        .iter()
        .map(|c| HardyEvaluator::new(c, height))
        .collect::<Result<_>>()?;
    let engine = Engine::new(q, height.max(1.0));
    let coprime: Vec<bool> = (0..q).map(|a| crate::characters::gcd(a, q) == 1).collect();
    let step = grid_step(q, height);
    let full = scan_grid(false, height, step);
    // Residue sums on the shared grid.
    let sums: Vec<(Vec<Complex64>, f64)> = exec.map(&full, |&t| engine.residue_sums(t, &coprime));
    let lists: Vec<Result<ZeroList>> = exec.map(&evaluators, |ev| {
        let grid: Vec<f64> = if ev.character().is_real() {
            full.iter().copied().filter(|&t| t >= -1e-12).collect()
        } else {
            full.clone()
        };
        let offset = full.len() - grid.len();
        let mut z = Vec::with_capacity(grid.len());
        for (i, &t) in grid.iter().enumerate() {
            let (s, err) = &sums[offset + i];
            if *err > L_ACCURACY {
                return Err(Error::Precision {
                    achieved: *err,
                    required: L_ACCURACY,
                });
            }
            let l: Complex64 = ev.values.iter().zip(s).map(|(c, v)| c * v).sum();
            z.push(ev.rotate(t, l).re);
        }
        let list = assemble(ev, &grid, &z, height, step)?;
        if list.complete {
            Ok(list)
        } else {
            find_zeros_with(ev.character(), height, Execution::Sequential)
        }
    });
    let mut out = Vec::new();
    for (ev, list) in evaluators.iter().zip(lists) {
        let list = list?;
        let c = ev.character();
        if !c.is_real() {
            let conj = table.conjugate(c);
            let mut mirror = list.clone();
            mirror.char_index = conj.index();
            for zz in &mut mirror.zeros {
                zz.gamma = -zz.gamma;
            }
            mirror.zeros.reverse();
            out.push(mirror);
        }
        out.push(list);
    }
    out.sort_by_key(|l| l.char_index);
    Ok(out)
}

/// Low-lying statistics of one zero list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaStats {
    /// |γ_χ|: smallest |γ| including a central zero.
    pub gamma1: f64,
    /// |γ̃_χ|: smallest nonzero |γ|.
    pub gamma1_nonreal: f64,
    /// n_χ: multiplicity at γ = 0 (0 unless a central zero is suspected).
    pub n_central: u32,
    /// Propagated completeness flag of the underlying list.
    pub complete: bool,
}

/// |γ_χ|, |γ̃_χ| and n_χ from a zero list.
pub fn gamma_stats(list: &ZeroList) -> GammaStats {
    let n_central = list
        .zeros
        .iter()
        .filter(|z| z.gamma == 0.0)
        .map(|z| z.multiplicity)
        .sum();
    let nonreal = list
        .zeros
        .iter()
        .filter(|z| z.gamma != 0.0)
        .map(|z| z.gamma.abs())
        .fold(f64::INFINITY, f64::min);
    GammaStats {
        gamma1: if n_central > 0 { 0.0 } else { nonreal },
        gamma1_nonreal: nonreal,
        n_central,
        complete: list.complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::build_characters;

    fn nonprincipal(q: u64) -> Character {
        build_characters(q)
            .unwrap()
            .primitive()
            .next()
            .unwrap()
            .clone()
    }

    #[test]
    fn dirichlet_beta_half() {
        let chi = nonprincipal(4);
        let l = l_on_critical_line(&chi, 0.0).unwrap();
        assert!((l.re - 0.667_691_457_189_609_2).abs() < 1e-12);
        assert!(l.im.abs() < 1e-14);
    }

    #[test]
    fn z_is_real_and_symmetric() {
        for q in [3, 4, 5, 7, 8, 11] {
            let table = build_characters(q).unwrap();
            for chi in table.primitive() {
                let ev = HardyEvaluator::new(chi, 40.0).unwrap();
                for i in 0..40 {
                    let t = -39.0 + 2.0 * i as f64;
                    let z = ev.hardy_z_complex(t).unwrap();
                    assert!(z.im.abs() < 1e-9, "q {q} t {t}: {z}");
                    if chi.is_real() {
                        let zm = ev.hardy_z(-t).unwrap();
                        assert!((z.re - zm).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn first_zero_mod_four() {
        let chi = nonprincipal(4);
        let zl = find_zeros(&chi, 30.0).unwrap();
        assert!(zl.complete);
        let st = gamma_stats(&zl);
        assert!((st.gamma1 - 6.020_948_904_697_597).abs() < 1e-8);
        assert_eq!(st.n_central, 0);
    }

    #[test]
    fn band_example() {
        let (main, err, ok) = zero_count_band(4, 30.0, 1);
        assert!(ok);
        assert!(main > 0.0 && err > 0.0);
    }

    #[test]
    fn rejects_imprimitive_and_large() {
        let t = build_characters(9).unwrap();
        let imp = t
            .characters()
            .iter()
            .find(|c| !c.is_primitive() && !c.is_principal())
            .unwrap();
        assert!(HardyEvaluator::new(imp, 10.0).is_err());
        let big = build_characters(503).unwrap();
        assert!(HardyEvaluator::new(big.primitive().next().unwrap(), 10.0).is_err());
        let chi = nonprincipal(5);
        assert!(HardyEvaluator::new(&chi, 500.0).is_err());
    }
}
