//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature for
//! complex-valued integrands.
//!
//! Used as the independent cross-check path for the Lerch functions; the
//! hot path never integrates.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

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
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target (0 disables).
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 0.0, max_intervals: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

/// 21-point Kronrod estimate on `[a, b]` and its difference to the
/// embedded 10-point Gauss rule.
fn gk21<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).norm();
    (value, err)
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the summed estimate meets the tolerance.
pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    let (value, error) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailed { achieved: total_err, tol: target });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution; keep its estimate
            return Err(Error::QuadratureFailed { achieved: total_err, tol: target });
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Interval { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Interval { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum to shed accumulated update error
    let (value, error) = heap
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), iv| (v + iv.value, e + iv.error));
    Ok(QuadratureResult { value, error, intervals: heap.len() })
}

/// Integrates `f` over `[0, ∞)` after the substitution `t = s/(1 − s)`.
pub fn integrate_semi_infinite<F>(f: F, opts: QuadratureOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    integrate(
        |s| {
            if s >= 1.0 {
                return Complex64::new(0.0, 0.0);
            }
            let one_minus = 1.0 - s;
            let t = s / one_minus;
            f(t) / (one_minus * one_minus)
        },
        0.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| Complex64::new(x * x * x, 2.0 * x), 0.0, 2.0, Default::default())
            .unwrap();
        assert!((r.value - Complex64::new(4.0, 4.0)).norm() < 1e-14);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn oscillatory_complex_exponential() {
        // ∫₀^π e^{ix} dx = 2i
        let r = integrate(|x| Complex64::new(0.0, x).exp(), 0.0, std::f64::consts::PI, Default::default())
            .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_is_refined() {
        // ∫₀¹ x^{-1/2} dx = 2
        let opts = QuadratureOptions { abs_tol: 1e-10, ..Default::default() };
        let r = integrate(|x| Complex64::new(x.powf(-0.5), 0.0), 0.0, 1.0, opts).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-9);
        assert!(r.intervals > 10);
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_semi_infinite(|t| Complex64::new((-3.0 * t).exp(), 0.0), Default::default())
            .unwrap();
        assert!((r.value.re - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn reports_failure_when_budget_is_tiny() {
        let opts = QuadratureOptions { abs_tol: 1e-15, rel_tol: 0.0, max_intervals: 2 };
        let err = integrate(|x| Complex64::new(x.powf(-0.9), 0.0), 0.0, 1.0, opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailed { .. }));
    }
}
