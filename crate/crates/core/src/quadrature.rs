//! Adaptive Gauss–Kronrod integration and Gauss–Hermite rules.

use crate::error::{Result, ThermoError};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_292_976_474,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Stopping rules for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive 21-point Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// error drops below `max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    let mut segments = vec![kronrod21(&f, a, b)];
    let mut evaluations = 21;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if !value.is_finite() {
            return Err(ThermoError::NonconvergentQuadrature {
                tolerance: opts.rel_tol,
                error: f64::INFINITY,
                intervals: segments.len(),
            });
        }
        if error <= target {
            return Ok(QuadratureResult {
                value,
                error,
                intervals: segments.len(),
                evaluations,
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(ThermoError::NonconvergentQuadrature {
                tolerance: opts.rel_tol,
                error,
                intervals: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval can no longer be split in floating point
            return Err(ThermoError::NonconvergentQuadrature {
                tolerance: opts.rel_tol,
                error,
                intervals: segments.len() + 1,
            });
        }
        segments.push(kronrod21(&f, seg.a, mid));
        segments.push(kronrod21(&f, mid, seg.b));
        evaluations += 42;
    }
}

/// `(h_n(x), h_{n-1}(x))` for the Hermite functions
/// `h_k = psi_k(x) exp(-x^2/2)`, with `psi_k` orthonormal under `exp(-x^2)`.
fn hermite_function_pair(x: f64, n: usize) -> (f64, f64) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // pi^(-1/4)
    let mut cur = PIM4 * (-0.5 * x * x).exp();
    let mut prev = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let next = x * (2.0 / jf).sqrt() * cur - ((jf - 1.0) / jf).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Nodes and weights of the `n`-point Gauss–Hermite rule for the weight `exp(-x^2)`.
///
/// Nodes are bracketed by sign changes of the Hermite function on a grid
/// finer than the smallest node spacing and polished by safeguarded Newton
/// steps; they are returned in descending order.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    let nf = n as f64;
    let h = |x: f64| hermite_function_pair(x, n);
    let mut positive = Vec::with_capacity(n / 2);
    // nodes lie inside |x| < sqrt(2n + 1) and are at least ~pi/sqrt(2n + 1) apart
    let edge = (2.0 * nf + 1.0).sqrt();
    let step = 0.1 * std::f64::consts::PI / edge;
    let cells = ((edge + 1.0) / step).ceil() as usize;
    let mut lo = step * 1e-3;
    let mut f_lo = h(lo).0;
    for c in 1..=cells {
        let hi = c as f64 * step;
        let f_hi = h(hi).0;
        if f_lo == 0.0 || (f_lo < 0.0) != (f_hi < 0.0) {
            positive.push(polish_root(&h, lo, hi, nf));
        }
        lo = hi;
        f_lo = f_hi;
    }
    assert_eq!(positive.len(), n / 2, "Gauss-Hermite node search lost roots for n = {n}");

    let weight = |x: f64| {
        let (_, prev) = h(x);
        (-x * x).exp() / (nf * prev * prev)
    };
    let mut x = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for &r in positive.iter().rev() {
        x.push(r);
        w.push(weight(r));
    }
    if n % 2 == 1 {
        x.push(0.0);
        w.push(weight(0.0));
    }
    for &r in &positive {
        x.push(-r);
        w.push(weight(r));
    }
    (x, w)
}

/// Root of `h_n` inside `[lo, hi]` where it changes sign.
fn polish_root(h: &impl Fn(f64) -> (f64, f64), mut lo: f64, mut hi: f64, nf: f64) -> f64 {
    let f_lo_negative = h(lo).0 < 0.0;
    let mut z = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (f, prev) = h(z);
        if f == 0.0 {
            return z;
        }
        if (f < 0.0) == f_lo_negative {
            lo = z;
        } else {
            hi = z;
        }
        let derivative = (2.0 * nf).sqrt() * prev - z * f;
        let newton = z - f / derivative;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - z).abs() <= 1e-15 * z.abs() {
            return next;
        }
        z = next;
    }
    z
}
