//! Dirichlet character groups, Kronecker symbols and fundamental discriminants.
//!
//! A group mod q is assembled from cyclic components via the CRT: one per odd
//! prime power, and for the 2-part `⟨-1⟩ × ⟨5⟩` when 8 | q. A character is an
//! exponent vector over the components.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Largest modulus accepted by [`build_characters`].
pub const MAX_MODULUS: u64 = 1_000_000;

/// Sentinel in discrete-log tables for residues that are not units.
const NOT_UNIT: u32 = u32::MAX;

/// One cyclic factor of `(Z/qZ)*`, living on the prime power `pk`.
#[derive(Debug)]
struct Component {
    p: u64,
    k: u32,
    pk: u64,
    order: u64,
    /// Discrete log of each residue mod `pk` within this component.
    dlog: Vec<u32>,
    kind: ComponentKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ComponentKind {
    /// Cyclic group of an odd prime power (or of 4, or the trivial group of 2).
    Cyclic,
    /// The `⟨-1⟩` factor of `(Z/2^k)*`, k ≥ 3.
    TwoSign,
    /// The `⟨5⟩` factor of `(Z/2^k)*`, k ≥ 3.
    TwoFive,
}

#[derive(Debug)]
struct Group {
    q: u64,
    components: Vec<Component>,
    /// lcm of the component orders.
    lcm: u64,
    /// `roots[j] = e^{2πij/lcm}`.
    roots: Vec<Complex64>,
}

/// A Dirichlet character mod q.
#[derive(Debug, Clone)]
pub struct Character {
    group: Arc<Group>,
    index: usize,
    exponents: Vec<u64>,
    conductor: u64,
    parity: u8,
    order: u64,
}

/// All φ(q) characters mod q.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    q: u64,
    characters: Vec<Character>,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization as `(p, k)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Smallest primitive root modulo an odd prime `p`.
fn primitive_root(p: u64) -> u64 {
    let fac = factorize(p - 1);
    (2..p)
        .find(|&g| fac.iter().all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1))
        .unwrap_or(1)
}

fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn odd_component(p: u64, k: u32) -> Component {
    let pk = p.pow(k);
    let order = pk / p * (p - 1);
    let mut g = primitive_root(p);
    if k >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    let mut dlog = vec![NOT_UNIT; pk as usize];
    let mut x = 1u64;
    for e in 0..order {
        dlog[x as usize] = e as u32;
        x = x * g % pk;
    }
    Component {
        p,
        k,
        pk,
        order,
        dlog,
        kind: ComponentKind::Cyclic,
    }
}

fn two_components(k: u32) -> Vec<Component> {
    let pk = 1u64 << k;
    if k == 1 {
        return vec![Component {
            p: 2,
            k,
            pk,
            order: 1,
            dlog: vec![NOT_UNIT, 0],
            kind: ComponentKind::Cyclic,
        }];
    }
    if k == 2 {
        return vec![Component {
            p: 2,
            k,
            pk,
            order: 2,
            dlog: vec![NOT_UNIT, 0, NOT_UNIT, 1],
            kind: ComponentKind::Cyclic,
        }];
    }
    let order5 = pk / 4;
    let mut sign = vec![NOT_UNIT; pk as usize];
    let mut five = vec![NOT_UNIT; pk as usize];
    let mut x = 1u64;
    for e in 0..order5 {
        sign[x as usize] = 0;
        five[x as usize] = e as u32;
        let neg = (pk - x) as usize;
        sign[neg] = 1;
        five[neg] = e as u32;
        x = x * 5 % pk;
    }
    vec![
        Component {
            p: 2,
            k,
            pk,
            order: 2,
            dlog: sign,
            kind: ComponentKind::TwoSign,
        },
        Component {
            p: 2,
            k,
            pk,
            order: order5,
            dlog: five,
            kind: ComponentKind::TwoFive,
        },
    ]
}

impl Group {
    fn new(q: u64) -> Group {
        let mut components = Vec::new();
        for (p, k) in factorize(q) {
            if p == 2 {
                components.extend(two_components(k));
            } else {
                components.push(odd_component(p, k));
            }
        }
        let l = components.iter().fold(1, |acc, c| lcm(acc, c.order));
        let roots = (0..l)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / l as f64))
            .collect();
        Group {
            q,
            components,
            lcm: l,
            roots,
        }
    }

    /// Exponent of `χ(n)` as a multiple of `2π/lcm`, or `None` if gcd(n, q) > 1.
    fn exponent(&self, exps: &[u64], n: u64) -> Option<u64> {
        let mut acc = 0u64;
        for (c, &e) in self.components.iter().zip(exps) {
            let d = c.dlog[(n % c.pk) as usize];
            if d == NOT_UNIT {
                return None;
            }
            acc += (e * d as u64 % c.order) * (self.lcm / c.order);
        }
        Some(acc % self.lcm)
    }

    /// Conductor read off the exponent vector, one prime power at a time.
    fn conductor(&self, exps: &[u64]) -> u64 {
        let mut cond = 1u64;
        let mut i = 0;
        while i < self.components.len() {
            let c = &self.components[i];
            match c.kind {
                ComponentKind::Cyclic => {
                    let e = exps[i];
                    if e != 0 {
                        if c.p == 2 {
                            cond *= 4;
                        } else {
                            cond *= c.p.pow(c.k - valuation(e, c.p));
                        }
                    }
                    i += 1;
                }
                ComponentKind::TwoSign => {
                    let e_sign = exps[i];
                    let e5 = exps[i + 1];
                    if e5 != 0 {
                        cond *= 1 << (c.k - valuation(e5, 2));
                    } else if e_sign != 0 {
                        cond *= 4;
                    }
                    i += 2;
                }
                ComponentKind::TwoFive => unreachable!("the 5-part always follows the sign part"),
            }
        }
        cond
    }
}

impl Character {
    /// χ(n); zero when gcd(n, q) > 1.
    pub fn eval(&self, n: u64) -> Complex64 {
        match self.group.exponent(&self.exponents, n) {
            Some(j) => self.group.roots[j as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// χ(n) for signed n, using χ(-1) for negative arguments.
    pub fn eval_signed(&self, n: i64) -> Complex64 {
        let q = self.group.q as i64;
        self.eval(n.rem_euclid(q) as u64)
    }

    /// Exponent j with χ(n) = e^{2πij/L}, L = [`Character::root_order`].
    pub fn exponent_of(&self, n: u64) -> Option<u64> {
        self.group.exponent(&self.exponents, n)
    }

    /// The common root order L of the group's character values.
    pub fn root_order(&self) -> u64 {
        self.group.lcm
    }

    /// The table of values `χ(0), ..., χ(q-1)`.
    pub fn values(&self) -> Vec<Complex64> {
        (0..self.group.q).map(|n| self.eval(n)).collect()
    }

    pub fn modulus(&self) -> u64 {
        self.group.q
    }

    /// Position of this character in its table; 0 is the principal character.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// δ_χ = (1 - χ(-1))/2.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.q
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Multiplicative order of χ.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Whether χ takes only real values.
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// Exponent vector of the complex conjugate character.
    pub fn conjugate_exponents(&self) -> Vec<u64> {
        self.group
            .components
            .iter()
            .zip(&self.exponents)
            .map(|(c, &e)| (c.order - e) % c.order)
            .collect()
    }

    /// Conductor by brute force: the least divisor d of q such that χ is
    /// trivial on every unit n ≡ 1 (mod d). Used as an independent check.
    pub fn conductor_by_kernel(&self) -> u64 {
        let q = self.group.q;
        let mut divisors: Vec<u64> = (1..=q).filter(|d| q.is_multiple_of(*d)).collect();
        divisors.sort_unstable();
        for d in divisors {
            let mut n = 1 % q;
            let mut trivial = true;
            while n < q.max(2) {
                if gcd(n, q) == 1 && self.exponent_of(n) != Some(0) {
                    trivial = false;
                    break;
                }
                n += d;
            }
            if trivial {
                return d;
            }
        }
        q
    }
}

/// Build the group of characters mod `q`.
///
/// # Arguments
/// * `q` - Modulus, `2 ≤ q ≤ MAX_MODULUS`.
pub fn build_characters(q: u64) -> Result<CharacterTable> {
    if q <= 1 {
        return domain(format!("build_characters requires q > 1, got {q}"));
    }
    if q > MAX_MODULUS {
        return Err(Error::Capacity(format!(
            "build_characters supports q ≤ {MAX_MODULUS}, got {q}"
        )));
    }
    let group = Arc::new(Group::new(q));
    let orders: Vec<u64> = group.components.iter().map(|c| c.order).collect();
    let count: u64 = orders.iter().product();
    let mut characters = Vec::with_capacity(count as usize);
    let mut exps = vec![0u64; orders.len()];
    for index in 0..count as usize {
        let conductor = group.conductor(&exps);
        let minus_one = group.exponent(&exps, q - 1).unwrap_or(0);
        let parity = if minus_one == 0 { 0 } else { 1 };
        let order = group
            .components
            .iter()
            .zip(&exps)
            .fold(1, |acc, (c, &e)| lcm(acc, c.order / gcd(e, c.order)));
        characters.push(Character {
            group: Arc::clone(&group),
            index,
            exponents: exps.clone(),
            conductor,
            parity,
            order,
        });
        // Mixed-radix increment.
        for (e, &o) in exps.iter_mut().zip(&orders) {
            *e += 1;
            if *e < o {
                break;
            }
            *e = 0;
        }
    }
    let table = CharacterTable { q, characters };
    debug_assert!(table.orthogonality_defect() < 1e-9);
    Ok(table)
}

impl CharacterTable {
    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Character> {
        self.characters.get(index)
    }

    pub fn principal(&self) -> &Character {
        &self.characters[0]
    }

    /// Primitive characters mod q (empty when q ≡ 2 mod 4).
    pub fn primitive(&self) -> impl Iterator<Item = &Character> {
        self.characters.iter().filter(|c| c.is_primitive())
    }

    /// Character with the given exponent vector.
    pub fn find_by_exponents(&self, exps: &[u64]) -> Option<&Character> {
        self.characters.iter().find(|c| c.exponents == exps)
    }

    /// The complex conjugate of `chi`.
    pub fn conjugate(&self, chi: &Character) -> &Character {
        self.find_by_exponents(&chi.conjugate_exponents())
            .expect("the conjugate exponent vector is in range")
    }

    /// Largest deviation of `Σ_{χ≠χ₀} χ(n)` from its predicted value over n ∈ [1, q].
    pub fn orthogonality_defect(&self) -> f64 {
        let phi = self.characters.len() as f64;
        (1..=self.q)
            .map(|n| {
                let s: Complex64 = self.characters[1..].iter().map(|c| c.eval(n)).sum();
                let expect = if gcd(n, self.q) > 1 {
                    0.0
                } else if n % self.q == 1 % self.q {
                    phi - 1.0
                } else {
                    -1.0
                };
                (s - expect).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Both sides of the average-conductor identity:
/// `(1/φ(q)) Σ_χ log con(χ)` and `log q - Σ_{p|q} log p/(p-1)`.
pub fn conductor_average(q: u64) -> Result<(f64, f64)> {
    if q <= 2 {
        return domain(format!("conductor_average requires q > 2, got {q}"));
    }
    let table = build_characters(q)?;
    let logs: Vec<f64> = table
        .characters()
        .iter()
        .map(|c| (c.conductor() as f64).ln())
        .collect();
    let lhs = crate::exec::pairwise_sum(&logs) / table.len() as f64;
    let rhs = (q as f64).ln()
        - factorize(q)
            .iter()
            .map(|&(p, _)| (p as f64).ln() / (p as f64 - 1.0))
            .sum::<f64>();
    Ok((lhs, rhs))
}

/// Jacobi symbol (a/n) for odd n > 0.
fn jacobi(a: i64, n: i64) -> i32 {
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol (d/n) for arbitrary integers.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if d < 0 {
            result = -result;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= v;
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d, n)
}

/// `is_squarefree[m]` for `m ≤ n`.
fn squarefree_table(n: usize) -> Vec<bool> {
    let mut sf = vec![true; n + 1];
    let mut k = 2usize;
    while k * k <= n {
        let sq = k * k;
        let mut m = sq;
        while m <= n {
            sf[m] = false;
            m += sq;
        }
        k += 1;
    }
    sf
}

fn is_fundamental_with(d: i64, sf: &[bool]) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let a = d.unsigned_abs() as usize;
    match d.rem_euclid(4) {
        1 => sf[a],
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sf[m.unsigned_abs() as usize]
        }
        _ => false,
    }
}

/// Whether `d` is a fundamental discriminant (d = 1 excluded).
pub fn is_fundamental_discriminant(d: i64) -> bool {
    let a = d.unsigned_abs() as usize;
    is_fundamental_with(d, &squarefree_table(a.max(1)))
}

/// Fundamental discriminants with `lo ≤ |d| ≤ hi`, sorted by `(|d|, d)`.
pub fn fundamental_discriminants_between(lo: u64, hi: u64) -> Vec<i64> {
    let sf = squarefree_table(hi as usize);
    let mut out = Vec::new();
    for a in lo.max(3)..=hi {
        for d in [-(a as i64), a as i64] {
            if is_fundamental_with(d, &sf) {
                out.push(d);
            }
        }
    }
    out
}

/// All fundamental discriminants with `|d| ≤ big_d`, sorted by `(|d|, d)`.
pub fn fundamental_discriminants(big_d: u64) -> Result<Vec<i64>> {
    if big_d < 3 {
        return domain(format!(
            "fundamental_discriminants requires D ≥ 3, got {big_d}"
        ));
    }
    Ok(fundamental_discriminants_between(1, big_d))
}

/// Counting conventions for fundamental discriminants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiscriminantCount {
    /// `#{d : |d| ≤ D}`, asymptotic to `(6/π²) D`.
    TwoSidedUpTo,
    /// `#{d : D ≤ |d| ≤ 2D}`, asymptotic to `(6/π²) D` as well.
    DyadicTwoSided,
    /// `#{d > 0 : d ≤ D}`, asymptotic to `(3/π²) D`.
    PositiveUpTo,
}

/// Count fundamental discriminants under a labelled convention.
pub fn count_fundamental_discriminants(big_d: u64, how: DiscriminantCount) -> usize {
    match how {
        DiscriminantCount::TwoSidedUpTo => fundamental_discriminants_between(1, big_d).len(),
        DiscriminantCount::DyadicTwoSided => {
            fundamental_discriminants_between(big_d, 2 * big_d).len()
        }
        DiscriminantCount::PositiveUpTo => fundamental_discriminants_between(1, big_d)
            .into_iter()
            .filter(|&d| d > 0)
            .count(),
    }
}

/// Largest `N · #{d}` product accepted by [`jutila_ratio`].
pub const JUTILA_MAX_WORK: u64 = 1_000_000_000;

/// `Σ_{n ≤ N, n ≠ □} |Σ*_{|d| ≤ D} χ_d(n)|² / (N D (log N)^{10})`.
pub fn jutila_ratio(n_max: u64, big_d: u64) -> Result<f64> {
    let ds = fundamental_discriminants(big_d.max(3))?;
    let ds: Vec<i64> = ds
        .into_iter()
        .filter(|d| d.unsigned_abs() <= big_d)
        .collect();
    if n_max.saturating_mul(ds.len() as u64) > JUTILA_MAX_WORK {
        return Err(Error::Capacity(format!(
            "jutila_ratio: N·#d = {} exceeds {JUTILA_MAX_WORK}",
            n_max as u128 * ds.len() as u128
        )));
    }
    if n_max < 2 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for n in 1..=n_max {
        let r = (n as f64).sqrt().round() as u64;
        if r * r == n {
            continue;
        }
        let s: i64 = ds.iter().map(|&d| kronecker(d, n as i64) as i64).sum();
        total += (s * s) as f64;
    }
    let ln = (n_max as f64).ln();
    Ok(total / (n_max as f64 * big_d as f64 * ln.powi(10)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let t5 = build_characters(5).unwrap();
        assert_eq!(t5.len(), 4);
        assert!(t5.characters().iter().any(|c| c.order() == 4));
        let t8 = build_characters(8).unwrap();
        assert_eq!(t8.len(), 4);
        assert!(t8.characters().iter().all(|c| c.is_real()));
        let t12 = build_characters(12).unwrap();
        let mut conds: Vec<u64> = t12.characters()[1..]
            .iter()
            .map(|c| c.conductor())
            .collect();
        conds.sort_unstable();
        assert_eq!(conds, vec![3, 4, 12]);
        assert!(build_characters(1).is_err());
    }

    #[test]
    fn values() {
        let t6 = build_characters(6).unwrap();
        assert_eq!(t6.principal().eval(5), Complex64::new(1.0, 0.0));
        let t4 = build_characters(4).unwrap();
        assert!((t4.characters()[1].eval(3) + 1.0).norm() < 1e-15);
        for q in [7, 9, 16, 30] {
            for c in build_characters(q).unwrap().characters() {
                assert_eq!(c.eval(q), Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn structural_conductor_matches_kernel_test() {
        for q in 2..=200 {
            for c in build_characters(q).unwrap().characters() {
                assert_eq!(
                    c.conductor(),
                    c.conductor_by_kernel(),
                    "q = {q}, {:?}",
                    c.exponents()
                );
            }
        }
    }

    #[test]
    fn conductor_average_examples() {
        let (l, r) = conductor_average(101).unwrap();
        let expect = 101f64.ln() - 101f64.ln() / 100.0;
        assert!((l - expect).abs() < 1e-12 && (r - expect).abs() < 1e-12);
        let (l, r) = conductor_average(12).unwrap();
        let expect = 12f64.ln() - 2f64.ln() - 3f64.ln() / 2.0;
        assert!((l - expect).abs() < 1e-12 && (r - expect).abs() < 1e-12);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 4), 1);
        assert_eq!(kronecker(12, 8), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(8, 7), 1);
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(7, 0), 0);
    }

    #[test]
    fn kronecker_agrees_with_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 97] {
            for d in -40i64..40 {
                let e = pow_mod(d.rem_euclid(p) as u64, ((p - 1) / 2) as u64, p as u64);
                let expect = match e {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(kronecker(d, p), expect, "d = {d}, p = {p}");
            }
        }
    }

    #[test]
    fn discriminants() {
        assert_eq!(
            fundamental_discriminants(8).unwrap(),
            vec![-3, -4, 5, -7, -8, 8]
        );
        assert_eq!(fundamental_discriminants(3).unwrap(), vec![-3]);
        assert!(fundamental_discriminants(2).is_err());
        assert!(is_fundamental_discriminant(-4));
        assert!(!is_fundamental_discriminant(-16));
        assert!(!is_fundamental_discriminant(1));
    }

    #[test]
    fn jutila_edges() {
        assert_eq!(jutila_ratio(1, 100).unwrap(), 0.0);
        let r = jutila_ratio(100, 100).unwrap();
        assert!(r > 0.0 && r < 1.0);
        assert!(jutila_ratio(1_000_000_000, 1_000).is_err());
    }
}
