//! Normalized single-emission spectrum at remaining mass `m`.
//!
//! The tunneling weight `exp(-8πE(m - E/2))` restricted to `E ∈ (0, m]` and
//! divided by
//!
//! ```text
//! Z(m) = ∫₀ᵐ exp(-8πE(m - E/2)) dE = D(2√π m) / (2√π)
//! ```
//!
//! with `D` Dawson's integral (complete the square in the exponent). The
//! survival function has the same structure,
//! `S(E) = exp(ΔS) · D(2√π(m - E)) / D(2√π m)`, and everything is evaluated
//! through logarithms of `D` so that no `exp(4πm²)` factor ever appears.
//!
//! This is a modeling layer on top of [`crate::tunneling`]: the exact
//! ledger never sees these normalized quantities.

use std::f64::consts::PI;

use crate::dawson::dawson_unchecked;
use crate::error::{check_finite, Error, Result};
use crate::tunneling::{Energy, EIGHT_PI};

/// `2√π`, the scale between energies and Dawson arguments.
const TWO_SQRT_PI: f64 = 3.544_907_701_811_032;

pub const QUANTILE_MAX_ITERATIONS: usize = 200;
/// Quantile tolerance on the energy, relative to `m`.
pub const QUANTILE_ENERGY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumModel {
    remaining_mass: f64,
    dawson_arg: f64,
    dawson_value: f64,
    log_normalizer: f64,
}

impl SpectrumModel {
    pub fn new(remaining_mass: f64) -> Result<Self> {
        check_finite("remaining mass", remaining_mass)?;
        if remaining_mass <= 0.0 {
            return Err(Error::NonPositiveMass(remaining_mass));
        }
        let dawson_arg = TWO_SQRT_PI * remaining_mass;
        let dawson_value = dawson_unchecked(dawson_arg);
        Ok(SpectrumModel {
            remaining_mass,
            dawson_arg,
            dawson_value,
            log_normalizer: dawson_value.ln() - TWO_SQRT_PI.ln(),
        })
    }

    pub fn remaining_mass(&self) -> f64 {
        self.remaining_mass
    }

    /// `ln Z(m)`.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn normalizer(&self) -> f64 {
        self.dawson_value / TWO_SQRT_PI
    }

    fn check_support(&self, e: f64) -> Result<()> {
        if e.is_finite() && (0.0..=self.remaining_mass).contains(&e) {
            Ok(())
        } else {
            Err(Error::OutsideSupport {
                energy: e,
                mass: self.remaining_mass,
            })
        }
    }

    fn exponent(&self, e: f64) -> f64 {
        -EIGHT_PI * e * (self.remaining_mass - 0.5 * e)
    }

    pub fn log_density(&self, e: Energy) -> Result<f64> {
        self.check_support(e.value())?;
        Ok(self.exponent(e.value()) - self.log_normalizer)
    }

    pub fn density(&self, e: Energy) -> Result<f64> {
        self.log_density(e).map(f64::exp)
    }

    /// `ln D(x_m - δ) - ln D(x_m)` for the shift `δ = 2√π E`.
    fn log_dawson_ratio(&self, e: f64) -> f64 {
        let x = self.dawson_arg;
        let d = self.dawson_value;
        let shift = -TWO_SQRT_PI * e;
        // (ln D)' = 1/D - 2x, (ln D)'' = -(ln D)'/D - 2
        let slope = 1.0 / d - 2.0 * x;
        if (shift * (slope.abs() + 1.0)).abs() < 1e-5 {
            let curvature = -slope / d - 2.0;
            return shift * slope + 0.5 * shift * shift * curvature;
        }
        let shifted = TWO_SQRT_PI * (self.remaining_mass - e);
        if shifted <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let ds = dawson_unchecked(shifted);
        ((ds - d) / d).ln_1p()
    }

    fn log_survival_unchecked(&self, e: f64) -> f64 {
        if e <= 0.0 {
            return 0.0;
        }
        if e >= self.remaining_mass {
            return f64::NEG_INFINITY;
        }
        (self.exponent(e) + self.log_dawson_ratio(e)).min(0.0)
    }

    /// `ln P(emission > E)`.
    pub fn log_survival(&self, e: Energy) -> Result<f64> {
        self.check_support(e.value())?;
        Ok(self.log_survival_unchecked(e.value()))
    }

    pub fn survival(&self, e: Energy) -> Result<f64> {
        self.log_survival(e).map(f64::exp)
    }

    fn cdf_unchecked(&self, e: f64) -> f64 {
        // written as a subtraction so that E = 0 gives +0
        0.0 - self.log_survival_unchecked(e).exp_m1()
    }

    pub fn cdf(&self, e: Energy) -> Result<f64> {
        self.check_support(e.value())?;
        Ok(self.cdf_unchecked(e.value()))
    }

    /// Inverse of [`SpectrumModel::cdf`] for `u ∈ (0, 1)`.
    ///
    /// Safeguarded Newton iteration on `ln F` (lower half) or `-ln S`
    /// (upper half), falling back to bisection whenever a step leaves the
    /// bracket.
    pub fn quantile(&self, u: f64) -> Result<Energy> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::LevelOutOfRange(u));
        }
        let m = self.remaining_mass;
        let lower_half = u <= 0.5;
        let target = if lower_half { u.ln() } else { -(-u).ln_1p() };
        // increasing in e, zero at the quantile; returns (g, g')
        let residual = |e: f64| -> (f64, f64) {
            let log_s = self.log_survival_unchecked(e);
            let log_p = self.exponent(e) - self.log_normalizer;
            if lower_half {
                let log_f = (-log_s.exp_m1()).ln();
                (log_f - target, (log_p - log_f).exp())
            } else {
                (-log_s - target, (log_p - log_s).exp())
            }
        };

        let rate = EIGHT_PI * m;
        let mut e = if rate * m > 1.0 {
            -(-u).ln_1p() / rate
        } else {
            u * m
        };
        if !(e > 0.0 && e < m) {
            e = 0.5 * m;
        }
        let tol = QUANTILE_ENERGY_TOLERANCE * m;
        let (mut lo, mut hi) = (0.0, m);
        for _ in 0..QUANTILE_MAX_ITERATIONS {
            let (g, slope) = residual(e);
            if g == 0.0 {
                return Energy::new(e);
            }
            if g < 0.0 {
                lo = e;
            } else {
                hi = e;
            }
            let newton = e - g / slope;
            let next = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let step = (next - e).abs();
            e = next;
            if (step <= tol && g.abs() <= 1e-12) || hi - lo <= 4.0 * f64::EPSILON * hi {
                return Energy::new(e);
            }
        }
        Err(Error::QuantileNoConvergence {
            u,
            mass: m,
            iterations: QUANTILE_MAX_ITERATIONS,
        })
    }

    /// Mean emitted energy, `m - (1 - exp(-4πm²)) / (8π Z)`.
    pub fn mean_energy(&self) -> f64 {
        let m = self.remaining_mass;
        let released = -(-4.0 * PI * m * m).exp_m1();
        m - released / (EIGHT_PI * self.normalizer())
    }

    /// `1/(8πm)`, the Hawking temperature at the remaining mass.
    pub fn hawking_temperature(&self) -> f64 {
        1.0 / (EIGHT_PI * self.remaining_mass)
    }
}

/// `ln Z(m)`.
pub fn log_normalizer(m: f64) -> Result<f64> {
    SpectrumModel::new(m).map(|s| s.log_normalizer())
}

pub fn cdf(model: &SpectrumModel, e: Energy) -> Result<f64> {
    model.cdf(e)
}

pub fn quantile(model: &SpectrumModel, u: f64) -> Result<Energy> {
    model.quantile(u)
}

pub fn mean_energy(model: &SpectrumModel) -> f64 {
    model.mean_energy()
}
