//! Adaptive Gauss–Kronrod (G10/K21) quadrature.
//!
//! This is the independent reference used to check the closed forms in
//! [`crate::spectrum`] and [`crate::dawson`]; nothing on the evaluation path
//! of those modules calls into it. The reported error is the raw
//! `|K21 - G10|` difference summed over subintervals, an outward bound for
//! the smooth integrands it is used on.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::compensated::NeumaierSum;

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
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
    pub max_subintervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            absolute: 0.0,
            relative: 1e-12,
            max_subintervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub subintervals: usize,
    pub converged: bool,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Quadrature {
    integrate_with_breakpoints(f, &[a, b], tol)
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the
/// subdivision given by `points` (sorted ascending).
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    tol: Tolerance,
) -> Quadrature {
    assert!(points.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = kronrod21(&f, w[0], w[1]);
            heap.push(Piece {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    loop {
        let value: NeumaierSum = heap.iter().map(|p| p.value).collect();
        let error: NeumaierSum = heap.iter().map(|p| p.error).collect();
        let (value, error) = (value.total(), error.total());
        let goal = tol.absolute.max(tol.relative * value.abs());
        let converged = error <= goal;
        if converged || heap.len() >= tol.max_subintervals {
            return Quadrature {
                value,
                error,
                subintervals: heap.len(),
                converged,
            };
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            let value: NeumaierSum = heap.iter().map(|p| p.value).collect();
            return Quadrature {
                value: value.total(),
                error,
                subintervals: heap.len(),
                converged: false,
            };
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod21(&f, a, b);
            heap.push(Piece { a, b, value, error });
        }
    }
}

/// Breakpoints `0, w, 2w, 4w, ...` up to `upper`, for integrands that
/// decay like `exp(-x / w)` away from a peak at zero.
pub fn geometric_breakpoints(scale: f64, upper: f64) -> Vec<f64> {
    let mut points = vec![0.0];
    let mut x = scale;
    while x < upper {
        points.push(x);
        x *= 2.0;
    }
    points.push(upper);
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, Tolerance::default());
        assert!((q.value - (256.0 / 8.0 - 8.0)).abs() < 1e-13);
        assert!(q.converged);
    }

    #[test]
    fn gaussian() {
        let q = integrate(
            |x: f64| (-x * x).exp(),
            -10.0,
            10.0,
            Tolerance {
                relative: 1e-14,
                ..Tolerance::default()
            },
        );
        assert!((q.value - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sharp_peak_with_breakpoints() {
        let rate = 1e4;
        let points = geometric_breakpoints(1.0 / rate, 1.0);
        let q =
            integrate_with_breakpoints(|x: f64| (-rate * x).exp(), &points, Tolerance::default());
        let exact = (1.0 - (-rate).exp()) / rate;
        assert!(((q.value - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let q = integrate(
            |x: f64| x.sqrt().recip(),
            0.0,
            1.0,
            Tolerance {
                relative: 1e-15,
                max_subintervals: 20,
                ..Tolerance::default()
            },
        );
        assert!(!q.converged);
    }
}
