//! Segmented sieve, von Mangoldt sums and prime counts in progressions.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::time::SystemTime;

use crate::characters::{kronecker, Character};
use crate::error::{domain, Error, Result};
use crate::exec::{pairwise_sum, Execution};
use crate::testfuncs::TestFunction;

/// Largest limit accepted by [`build_table`].
pub const MAX_LIMIT: u64 = 10_000_000_000;

/// Sieve segment length in integers.
const SEGMENT: u64 = 1 << 18;

/// Primes per work item in the parallel prime sums.
const CHUNK: usize = 4096;

/// Magic bytes of the binary cache format.
const CACHE_MAGIC: &[u8; 4] = b"EFZ1";

/// π(10⁶), checked whenever the table reaches that far.
const PI_1E6: usize = 78_498;

/// All primes up to a limit.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    built_at: SystemTime,
}

/// How the terms of a prime sum are weighted.
#[derive(Debug, Clone, Copy)]
pub enum Twist<'a> {
    None,
    /// Weight `Re χ(n)`.
    Character(&'a Character),
    /// Weight `(d|n)`.
    Kronecker(i64),
}

/// A weighted sum `Σ w(n) F(log n / T) Λ(n)/√n` over `n ≤ e^{cT}`.
#[derive(Debug, Clone, Copy)]
pub struct WeightedSumQuery<'a> {
    pub f: TestFunction,
    pub t_dil: f64,
    pub twist: Twist<'a>,
}

/// Sieve all primes up to `limit`.
///
/// # Arguments
/// * `limit` - Upper bound, between 2 and [`MAX_LIMIT`].
pub fn build_table(limit: u64) -> Result<PrimeTable> {
    build_table_with(limit, Execution::default())
}

/// [`build_table`] with an explicit execution policy for the segment loop.
pub fn build_table_with(limit: u64, exec: Execution) -> Result<PrimeTable> {
    if !(2..=MAX_LIMIT).contains(&limit) {
        return Err(Error::Capacity(format!(
            "prime table limit must lie in [2, {MAX_LIMIT}], got {limit}"
        )));
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root.min(limit));
    let segments = limit.div_ceil(SEGMENT) as usize;
    let parts = exec.map_range(segments, |s| {
        let lo = s as u64 * SEGMENT;
        let hi = (lo + SEGMENT).min(limit + 1);
        sieve_segment(lo, hi, &base)
    });
    let primes: Vec<u64> = parts.into_iter().flatten().collect();
    let table = PrimeTable {
        limit,
        primes,
        built_at: SystemTime::now(),
    };
    table.self_check()?;
    Ok(table)
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| is[k]).map(|k| k as u64).collect()
}

/// Primes in `[lo, hi)` given all primes up to `√hi`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut is = vec![true; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut m = start;
        while m < hi {
            is[(m - lo) as usize] = false;
            m += p;
        }
    }
    (0..len)
        .filter(|&i| is[i] && lo + i as u64 >= 2)
        .map(|i| lo + i as u64)
        .collect()
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn built_at(&self) -> SystemTime {
        self.built_at
    }

    /// π(x) for x within the table.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    fn self_check(&self) -> Result<()> {
        if self.limit >= 1_000_000 && self.count_up_to(1_000_000) != PI_1E6 {
            return Err(Error::Data(format!(
                "sieve self-check failed: pi(10^6) = {}",
                self.count_up_to(1_000_000)
            )));
        }
        Ok(())
    }

    fn check_reach(&self, x: f64) -> Result<u64> {
        if !(x >= 0.0) {
            return domain(format!("prime sum bound must be non-negative, got {x}"));
        }
        if x > self.limit as f64 + 0.5 {
            return Err(Error::Capacity(format!(
                "requested primes up to {x:.6e}, table limit is {}",
                self.limit
            )));
        }
        Ok(x.floor() as u64)
    }

    /// Write the table in the `EFZ1` cache format.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&self.limit.to_le_bytes())?;
        let mut prev = 0u64;
        for &p in &self.primes {
            let gap = u32::try_from(p - prev)
                .map_err(|_| Error::Capacity(format!("prime gap after {prev} exceeds 32 bits")))?;
            w.write_all(&gap.to_le_bytes())?;
            prev = p;
        }
        w.flush()?;
        Ok(())
    }

    /// Read a cache file; `Ok(None)` when its limit differs from `limit`.
    pub fn load(path: &Path, limit: u64) -> Result<Option<PrimeTable>> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Data("prime cache: bad magic bytes".into()));
        }
        let mut lim = [0u8; 8];
        r.read_exact(&mut lim)?;
        if u64::from_le_bytes(lim) != limit {
            return Ok(None);
        }
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() % 4 != 0 {
            return Err(Error::Data("prime cache: truncated gap stream".into()));
        }
        let mut primes = Vec::with_capacity(bytes.len() / 4);
        let mut p = 0u64;
        for chunk in bytes.chunks_exact(4) {
            p += u32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as u64;
            primes.push(p);
        }
        let table = PrimeTable {
            limit,
            primes,
            built_at: SystemTime::now(),
        };
        table.self_check()?;
        Ok(Some(table))
    }

    /// Load from `path` when it matches `limit`, otherwise sieve and write it.
    pub fn load_or_build(path: &Path, limit: u64) -> Result<PrimeTable> {
        if path.exists() {
            if let Some(t) = PrimeTable::load(path, limit)? {
                return Ok(t);
            }
        }
        let t = build_table(limit)?;
        t.save(path)?;
        Ok(t)
    }

    /// Chebyshev's ψ(x) = Σ_{p^k ≤ x} log p.
    pub fn chebyshev_psi(&self, x: f64) -> Result<f64> {
        let n = self.check_reach(x)?;
        let ps = &self.primes[..self.count_up_to(n)];
        let terms: Vec<f64> = ps
            .iter()
            .map(|&p| {
                let mut k = 0u32;
                let mut pk = p;
                loop {
                    k += 1;
                    match pk.checked_mul(p) {
                        Some(next) if next <= n => pk = next,
                        _ => break,
                    }
                }
                k as f64 * (p as f64).ln()
            })
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// `Σ_{n = p^k ≤ e^{cT}} w(n) F(log n / T) Λ(n)/√n`.
    pub fn weighted_sum(&self, q: &WeightedSumQuery<'_>) -> Result<f64> {
        self.weighted_sum_with(q, Execution::default())
    }

    /// [`PrimeTable::weighted_sum`] with an explicit execution policy.
    ///
    /// Partial sums are formed per fixed-size chunk of primes and combined
    /// pairwise, so the result does not depend on the policy.
    pub fn weighted_sum_with(&self, q: &WeightedSumQuery<'_>, exec: Execution) -> Result<f64> {
        let c = q.f.support_halfwidth();
        if !c.is_finite() {
            return domain("weighted_sum needs a compactly supported test function");
        }
        if !(q.t_dil > 0.0) {
            return domain(format!("weighted_sum needs T > 0, got {}", q.t_dil));
        }
        let x = (c * q.t_dil).exp();
        let n_max = self.check_reach(x)?;
        let ps = &self.primes[..self.count_up_to(n_max)];
        let chunks: Vec<&[u64]> = ps.chunks(CHUNK).collect();
        let partial = exec.map(&chunks, |chunk| {
            let mut terms = Vec::with_capacity(chunk.len());
            for &p in chunk.iter() {
                let lp = (p as f64).ln();
                let mut pk = p;
                let mut s = 0.0;
                loop {
                    let w = match q.twist {
                        Twist::None => 1.0,
                        Twist::Character(chi) => chi.eval(pk).re,
                        Twist::Kronecker(d) => kronecker(d, pk as i64) as f64,
                    };
                    if w != 0.0 {
                        let ln = pk as f64;
                        s += w * q.f.eval(ln.ln() / q.t_dil) * lp / ln.sqrt();
                    }
                    match pk.checked_mul(p) {
                        Some(next) if next <= n_max => pk = next,
                        _ => break,
                    }
                }
                terms.push(s);
            }
            pairwise_sum(&terms)
        });
        Ok(pairwise_sum(&partial))
    }

    /// π(x; q, a) = #{p ≤ x : p ≡ a (mod q)}.
    pub fn pi_progression(&self, x: f64, q: u64, a: u64) -> Result<usize> {
        if q == 0 {
            return domain("pi_progression needs q ≥ 1");
        }
        let n = self.check_reach(x)?;
        let a = a % q;
        Ok(self.primes[..self.count_up_to(n)]
            .iter()
            .filter(|&&p| p % q == a)
            .count())
    }
}

/// Free-function form of [`PrimeTable::chebyshev_psi`].
pub fn chebyshev_psi(x: f64, table: &PrimeTable) -> Result<f64> {
    table.chebyshev_psi(x)
}

/// Free-function form of [`PrimeTable::weighted_sum`].
pub fn weighted_sum(q: &WeightedSumQuery<'_>, table: &PrimeTable) -> Result<f64> {
    table.weighted_sum(q)
}

/// Free-function form of [`PrimeTable::pi_progression`].
pub fn pi_progression(x: f64, q: u64, a: u64, table: &PrimeTable) -> Result<usize> {
    table.pi_progression(x, q, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(build_table(100).unwrap().primes().len(), 25);
        assert_eq!(build_table(2).unwrap().primes(), &[2]);
        assert!(build_table(1).is_err());
        assert!(build_table(MAX_LIMIT + 1).is_err());
    }

    #[test]
    fn segments_agree_with_simple_sieve() {
        let limit = 3 * SEGMENT + 12_345;
        let a = build_table_with(limit, Execution::Sequential).unwrap();
        let b = simple_sieve(limit);
        assert_eq!(a.primes(), &b[..]);
        let c = build_table_with(limit, Execution::Parallel).unwrap();
        assert_eq!(a.primes(), c.primes());
    }

    #[test]
    fn psi_of_ten() {
        let t = build_table(100).unwrap();
        let expect = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((t.chebyshev_psi(10.0).unwrap() - expect).abs() < 1e-14);
        assert!(t.chebyshev_psi(101.0).is_err());
    }

    #[test]
    fn progression_counts() {
        let t = build_table(100).unwrap();
        assert_eq!(t.pi_progression(100.0, 4, 1).unwrap(), 11);
        assert_eq!(t.pi_progression(100.0, 4, 3).unwrap(), 13);
        assert_eq!(t.pi_progression(10.0, 1, 0).unwrap(), 4);
    }

    #[test]
    fn triangle_sum_by_hand() {
        let t = build_table(100).unwrap();
        let td = 4f64.ln();
        let q = WeightedSumQuery {
            f: TestFunction::triangle(),
            t_dil: td,
            twist: Twist::None,
        };
        let expect = 2f64.ln() / 2f64.sqrt() * (1.0 - 2f64.ln() / td)
            + 3f64.ln() / 3f64.sqrt() * (1.0 - 3f64.ln() / td);
        assert!((t.weighted_sum(&q).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("efz-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("primes.bin");
        let t = build_table(50_000).unwrap();
        t.save(&path).unwrap();
        let back = PrimeTable::load(&path, 50_000).unwrap().unwrap();
        assert_eq!(t.primes(), back.primes());
        assert!(PrimeTable::load(&path, 50_001).unwrap().is_none());
        let again = PrimeTable::load_or_build(&path, 50_000).unwrap();
        assert_eq!(again.primes().len(), t.primes().len());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
