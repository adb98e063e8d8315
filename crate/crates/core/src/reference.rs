//! Quadrature references for the spectrum closed forms.
//!
//! Each function integrates the raw tunneling exponent directly, sharing
//! nothing with [`crate::spectrum`] or [`crate::dawson`] besides the
//! constant `8π`.

use crate::quadrature::{geometric_breakpoints, integrate_with_breakpoints, Quadrature, Tolerance};
use crate::tunneling::EIGHT_PI;

const TIGHT: Tolerance = Tolerance {
    absolute: 0.0,
    relative: 1e-14,
    max_subintervals: 4000,
};

fn weight(m: f64, e: f64) -> f64 {
    (-EIGHT_PI * e * (m - 0.5 * e)).exp()
}

/// Breakpoints for a density decaying at rate `8πm` from `E = 0`.
fn spectrum_points(m: f64, upper: f64) -> Vec<f64> {
    geometric_breakpoints(1.0 / (EIGHT_PI * m), upper)
}

/// `D(x) = ∫₀ˣ exp(-u(2x - u)) du`, the defining integral after `t = x - u`.
pub fn dawson_quadrature(x: f64) -> Quadrature {
    let points = if x > 1.0 {
        geometric_breakpoints(0.5 / x, x)
    } else {
        vec![0.0, x]
    };
    integrate_with_breakpoints(
        |u: f64| (-u * (2.0 * x - u)).exp(),
        &points,
        Tolerance {
            absolute: 1e-17,
            ..TIGHT
        },
    )
}

/// `Z(m) = ∫₀ᵐ exp(-8πE(m - E/2)) dE`.
pub fn normalizer_quadrature(m: f64) -> Quadrature {
    integrate_with_breakpoints(|e| weight(m, e), &spectrum_points(m, m), TIGHT)
}

pub fn log_normalizer_quadrature(m: f64) -> f64 {
    normalizer_quadrature(m).value.ln()
}

/// `∫₀ᴱ p(t) dt` with the density normalized by quadrature.
pub fn cdf_quadrature(m: f64, e: f64) -> f64 {
    let z = normalizer_quadrature(m).value;
    if e <= 0.0 {
        return 0.0;
    }
    let points: Vec<f64> = spectrum_points(m, m)
        .into_iter()
        .filter(|&p| p < e)
        .chain(std::iter::once(e))
        .collect();
    integrate_with_breakpoints(|t| weight(m, t), &points, TIGHT).value / z
}

/// `∫₀ᵐ E p(E) dE`.
pub fn mean_quadrature(m: f64) -> f64 {
    let z = normalizer_quadrature(m).value;
    integrate_with_breakpoints(|e| e * weight(m, e), &spectrum_points(m, m), TIGHT).value / z
}

/// `∫₀ᵐ p(E) dE` with `p` built from a given `ln Z`.
pub fn total_probability(m: f64, log_normalizer: f64) -> f64 {
    integrate_with_breakpoints(
        |e| (-EIGHT_PI * e * (m - 0.5 * e) - log_normalizer).exp(),
        &spectrum_points(m, m),
        TIGHT,
    )
    .value
}

/// Median by bisection on [`cdf_quadrature`].
pub fn quantile_quadrature(m: f64, u: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, m);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf_quadrature(m, mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * m {
            break;
        }
    }
    0.5 * (lo + hi)
}
