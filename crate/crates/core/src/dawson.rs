//! Dawson's integral `D(x) = exp(-x²) ∫₀ˣ exp(t²) dt`.
//!
//! Three regimes, each accurate to a few ulp of absolute error:
//!
//! * `x < 0.2`: the Maclaurin series `Σ (-2x²)ⁿ x / (2n+1)!!`;
//! * `0.2 <= x <= 10`: Rybicki's sampling sum
//!   `D(x) ≈ π^{-1/2} Σ_{n odd} exp(-(x - nh)²) / n`, whose aliasing error
//!   is `O(exp(-(π/2h)²))`, about `1e-27` for `h = 0.2`;
//! * `x > 10`: the asymptotic series `(1/2x) Σ (2k-1)!! / (2x²)ᵏ`, truncated
//!   once terms drop below an ulp (they do so long before the series
//!   starts to diverge).

use std::f64::consts::PI;

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 0.2;
const ASYMPTOTIC_LIMIT: f64 = 10.0;
const STEP: f64 = 0.2;
// exp(-WINDOW²) is far below an ulp of the result
const WINDOW: f64 = 7.0;

/// Argument of the maximum of `D`.
pub const DAWSON_ARGMAX: f64 = 0.924_138_873_004_591_8;
/// `D(DAWSON_ARGMAX)`.
pub const DAWSON_MAX: f64 = 0.541_044_224_635_181_7;

/// Dawson's integral for `x >= 0`.
pub fn dawson(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::DawsonDomain(x));
    }
    Ok(dawson_unchecked(x))
}

pub(crate) fn dawson_unchecked(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        series(x)
    } else if x <= ASYMPTOTIC_LIMIT {
        rybicki(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = 0.0_f64;
    let mut n = 0.0;
    while term.abs() > 1e-18 * sum.abs() || n < 1.0 {
        sum += term;
        n += 1.0;
        term *= -2.0 * x2 / (2.0 * n + 1.0);
    }
    sum
}

fn rybicki(x: f64) -> f64 {
    let lo = ((x - WINDOW) / STEP).ceil() as i64;
    let hi = ((x + WINDOW) / STEP).floor() as i64;
    let mut sum = 0.0;
    for n in lo..=hi {
        if n % 2 == 0 {
            continue;
        }
        let d = x - n as f64 * STEP;
        sum += (-d * d).exp() / n as f64;
    }
    sum / PI.sqrt()
}

fn asymptotic(x: f64) -> f64 {
    if x > 1e8 {
        return 0.5 / x;
    }
    let inv = 0.5 / (x * x);
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut k = 0.0;
    loop {
        sum += term;
        k += 1.0;
        term *= (2.0 * k - 1.0) * inv;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum * 0.5 / x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_and_domain() {
        assert_eq!(dawson(0.0).unwrap(), 0.0);
        assert!(dawson(-0.1).is_err());
        assert!(dawson(f64::NAN).is_err());
        assert!(dawson(f64::INFINITY).is_err());
    }

    #[test]
    fn small_argument_series() {
        for x in [1e-300, 1e-8, 1e-4] {
            let d = dawson(x).unwrap();
            assert!((d - (x - 2.0 * x * x * x / 3.0)).abs() <= 1e-16 * x);
        }
    }

    #[test]
    fn regimes_join_continuously() {
        assert!((series(SERIES_LIMIT) - rybicki(SERIES_LIMIT)).abs() < 1e-16);
        assert!((rybicki(ASYMPTOTIC_LIMIT) - asymptotic(ASYMPTOTIC_LIMIT)).abs() < 1e-16);
        assert!((rybicki(12.0) - asymptotic(12.0)).abs() < 1e-16);
        assert!((rybicki(0.19) - series(0.19)).abs() < 1e-16);
    }

    #[test]
    fn maximum() {
        let d = dawson(DAWSON_ARGMAX).unwrap();
        assert!((d - DAWSON_MAX).abs() < 1e-15);
        for dx in [1e-3, -1e-3] {
            assert!(dawson(DAWSON_ARGMAX + dx).unwrap() < d);
        }
    }

    #[test]
    fn tends_to_inverse_twice_x() {
        for x in [1e3, 1e6, 1e12] {
            let d = dawson(x).unwrap();
            assert!((d * 2.0 * x - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn satisfies_ode() {
        // D'(x) = 1 - 2x D(x)
        for x in [0.1, 0.5, 1.3, 3.0, 7.5, 15.0] {
            let h = 1e-5;
            let deriv = (dawson(x + h).unwrap() - dawson(x - h).unwrap()) / (2.0 * h);
            let ode = 1.0 - 2.0 * x * dawson(x).unwrap();
            assert!((deriv - ode).abs() < 1e-9, "x={x}");
        }
    }
}
