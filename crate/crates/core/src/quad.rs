//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! Intervals are bisected in order of decreasing error estimate until the
//! total estimate drops below `max(abs_tol, rel_tol * |I|)`. User breakpoints
//! split the range up front so that kinks never sit inside a panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// 21-point Kronrod abscissae on [0, 1]; odd positions are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_292_686_950,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and limits for [`Quad::integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quad {
    fn default() -> Self {
        Quad {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel {
        a,
        b,
        value,
        error: err,
    }
}

impl Quad {
    /// Quadrature with absolute tolerance `tol` and no relative criterion.
    pub fn abs(tol: f64) -> Self {
        Quad {
            abs_tol: tol,
            rel_tol: 0.0,
            ..Quad::default()
        }
    }

    /// Builder-style override of the relative tolerance.
    pub fn rel(mut self, tol: f64) -> Self {
        self.rel_tol = tol;
        self
    }

    /// Builder-style override of the subdivision limit.
    pub fn limit(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    /// Integrate `f` over `[points[0], points[last]]`, using every entry of
    /// `points` as a mandatory breakpoint.
    ///
    /// # Arguments
    /// * `f` - Integrand, finite on the open interval.
    /// * `points` - Ascending breakpoints, at least two.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<QuadResult> {
        if points.len() < 2 {
            return Err(Error::Domain(
                "quadrature needs at least two breakpoints".into(),
            ));
        }
        let mut pts: Vec<f64> = points.to_vec();
        let sign = if pts[0] > pts[pts.len() - 1] {
            pts.reverse();
            -1.0
        } else {
            1.0
        };
        pts.dedup();
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0usize;
        for w in pts.windows(2) {
            if w[1] > w[0] {
                heap.push(gk21(&f, w[0], w[1]));
                evaluations += 21;
            }
        }
        if heap.is_empty() {
            return Ok(QuadResult {
                value: 0.0,
                error: 0.0,
                evaluations,
            });
        }
        let total = |h: &BinaryHeap<Panel>| -> (f64, f64) {
            let mut parts: Vec<Panel> = h.iter().copied().collect();
            parts.sort_by(|x, y| x.a.total_cmp(&y.a));
            parts
                .iter()
                .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
        };
        let mut splits = 0usize;
        let (mut value, mut error) = total(&heap);
        loop {
            let tol = self.abs_tol.max(self.rel_tol * value.abs());
            if error <= tol {
                break;
            }
            if splits >= self.max_subdivisions {
                return Err(Error::Quadrature {
                    estimate: error,
                    tolerance: tol,
                    evaluations,
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // The panel cannot be split further in floating point.
                return Err(Error::Quadrature {
                    estimate: error,
                    tolerance: tol,
                    evaluations,
                });
            }
            let left = gk21(&f, worst.a, mid);
            let right = gk21(&f, mid, worst.b);
            evaluations += 42;
            splits += 1;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            if splits.is_multiple_of(64) {
                let t = total(&heap);
                value = t.0;
                error = t.1;
            }
        }
        let (value, error) = total(&heap);
        Ok(QuadResult {
            value: sign * value,
            error,
            evaluations,
        })
    }

    /// Integrate `f` over `[a, ∞)` through the map `x = a + u/(1-u)`.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<QuadResult> {
        let g = |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            let x = a + u / w;
            let v = f(x) / (w * w);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        self.integrate(g, &[0.0, 0.5, 1.0])
    }
}

/// Shorthand for an absolute-tolerance integral that returns only the value.
pub fn integrate<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> Result<f64> {
    Quad::abs(tol).integrate(f, points).map(|r| r.value)
}
