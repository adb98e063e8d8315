//! Exact tunneling probabilities in log domain.
//!
//! The emission probability at energy `E` from a hole of mass `M` is
//! `exp(ΔS)` with `ΔS = -8πE(M - E/2)`, the change of the
//! Bekenstein–Hawking entropy. Nothing here is normalized: these are the
//! event weights whose log-ratios carry the non-Markovian memory and the
//! chain-rule entropy identities. The normalized sampling density lives in
//! [`crate::spectrum`].
//!
//! Differences of log-probabilities are evaluated in double-double
//! arithmetic so that identities such as `ln P(E3|E2,E1) - ln P(E3|E2) =
//! 8πE1E3` survive the cancellation between terms of size `8πM²`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Sub;

use crate::compensated::TwoFloat;
use crate::error::{check_finite, Error, Result};

/// `8π`, the coefficient of every tunneling exponent.
pub const EIGHT_PI: f64 = 8.0 * PI;

/// Relative slack allowed when a *sum* of energies is compared with a
/// mass, so that partitions normalized in floating point still count as
/// admissible (and as exhausting).
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Energies below this fraction of the initial mass are rejected inside an
/// [`EmissionSequence`].
pub const DEGENERATE_FRACTION: f64 = 1e-15;

/// Schwarzschild black hole of mass `M` in natural units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleState {
    mass: f64,
}

impl BlackHoleState {
    pub fn new(mass: f64) -> Result<Self> {
        check_finite("mass", mass)?;
        if mass <= 0.0 {
            return Err(Error::NonPositiveMass(mass));
        }
        Ok(BlackHoleState { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Horizon area `4π(2M)² = 16πM²`.
    pub fn horizon_area(&self) -> f64 {
        16.0 * PI * self.mass * self.mass
    }

    /// `S_BH = A/4 = 4πM²`, in nats.
    pub fn bh_entropy(&self) -> f64 {
        4.0 * PI * self.mass * self.mass
    }

    pub fn bh_entropy_bits(&self) -> f64 {
        self.bh_entropy() / std::f64::consts::LN_2
    }
}

/// Emitted energy, `E >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Energy(f64);

impl Energy {
    pub const ZERO: Energy = Energy(0.0);

    pub fn new(value: f64) -> Result<Self> {
        check_finite("energy", value)?;
        if value < 0.0 {
            return Err(Error::NegativeEnergy(value));
        }
        Ok(Energy(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Converts a list of raw values, failing on the first invalid one.
    pub fn list(values: &[f64]) -> Result<Vec<Energy>> {
        values.iter().map(|&v| Energy::new(v)).collect()
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Natural logarithm of a probability (`<= 0`).
///
/// There is deliberately no implicit conversion to a linear probability;
/// [`LogProb::to_probability`] is the explicit and lossy way out, and it
/// underflows to zero once `-ln P` exceeds about 745 (e.g. `exp(-4πM²)`
/// for `M >= 8`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogProb(f64);

impl LogProb {
    pub const CERTAIN: LogProb = LogProb(0.0);

    pub fn new(log_value: f64) -> Result<Self> {
        if log_value.is_nan() || log_value > 0.0 {
            return Err(Error::NonFinite {
                what: "log-probability (must be <= 0)",
                value: log_value,
            });
        }
        Ok(LogProb(log_value))
    }

    pub(crate) fn from_raw(log_value: f64) -> Self {
        debug_assert!(log_value <= 0.0 || log_value.is_nan(), "log-probability {log_value} > 0");
        LogProb(log_value.min(0.0))
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    /// `-ln P`, in nats.
    pub fn self_information(self) -> f64 {
        -self.0
    }

    /// `exp(ln P)`; may underflow to `0.0`.
    pub fn to_probability(self) -> f64 {
        self.0.exp()
    }
}

impl Sub for LogProb {
    type Output = f64;

    /// Log-ratio `ln(P1 / P2)`.
    fn sub(self, rhs: LogProb) -> f64 {
        self.0 - rhs.0
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `ΔS(M, s) = -8π s (M - s/2)` in double-double.
pub(crate) fn delta_s_exact(mass: f64, total: TwoFloat) -> TwoFloat {
    total * (TwoFloat::new(mass) - total.half()) * -EIGHT_PI
}

fn exact_sum(energies: &[Energy]) -> TwoFloat {
    energies.iter().map(|e| e.value()).sum()
}

fn check_total(state: &BlackHoleState, total: TwoFloat) -> Result<()> {
    let mass = state.mass();
    if total.to_f64() > mass * (1.0 + SUM_TOLERANCE) {
        return Err(Error::EmissionsExceedInitialMass {
            total: total.to_f64(),
            mass,
        });
    }
    Ok(())
}

/// Log tunneling probability of a single emission, `ΔS = -8πE(M - E/2)`.
pub fn delta_s(state: &BlackHoleState, e: Energy) -> Result<LogProb> {
    if e.value() > state.mass() {
        return Err(Error::EmissionExceedsMass {
            energy: e.value(),
            mass: state.mass(),
        });
    }
    Ok(LogProb::from_raw(
        delta_s_exact(state.mass(), TwoFloat::new(e.value())).to_f64(),
    ))
}

/// Joint log-probability of several emissions: that of one emission
/// carrying their total energy.
pub fn joint_log_prob(state: &BlackHoleState, energies: &[Energy]) -> Result<LogProb> {
    let total = exact_sum(energies);
    check_total(state, total)?;
    Ok(LogProb::from_raw(
        delta_s_exact(state.mass(), total).to_f64(),
    ))
}

fn conditional_exact(mass: f64, history: TwoFloat, e: f64) -> TwoFloat {
    delta_s_exact(mass, history + e) - delta_s_exact(mass, history)
}

/// `ln P(E | history)` by the Bayes rule, `ln P(history, E) - ln P(history)`.
pub fn conditional_log_prob(
    state: &BlackHoleState,
    history: &[Energy],
    e: Energy,
) -> Result<LogProb> {
    let past = exact_sum(history);
    check_total(state, past + e.value())?;
    Ok(LogProb::from_raw(
        conditional_exact(state.mass(), past, e.value()).to_f64(),
    ))
}

/// Closed form of the conditional: `-8πE(M - Σhistory - E/2)`, i.e. the
/// single-emission probability at the remaining mass.
pub fn conditional_log_prob_closed_form(
    state: &BlackHoleState,
    history: &[Energy],
    e: Energy,
) -> Result<LogProb> {
    let past = exact_sum(history);
    check_total(state, past + e.value())?;
    let remaining = TwoFloat::new(state.mass()) - past;
    let value = (remaining - 0.5 * e.value()) * e.value() * -EIGHT_PI;
    Ok(LogProb::from_raw(value.to_f64()))
}

/// `ln P(E3 | E2, E1) - ln P(E3 | E2)`, the amount by which the emission
/// process fails the Markov condition. Analytically `8πE1E3`.
pub fn markov_violation(state: &BlackHoleState, e1: Energy, e2: Energy, e3: Energy) -> Result<f64> {
    let mass = state.mass();
    let full = TwoFloat::new(e1.value()) + e2.value();
    check_total(state, full + e3.value())?;
    let with_first = conditional_exact(mass, full, e3.value());
    let without_first = conditional_exact(mass, TwoFloat::new(e2.value()), e3.value());
    Ok((with_first - without_first).to_f64())
}

/// Pairwise correlation `ln P(E1,E2) - ln P(E1) - ln P(E2) = 8πE1E2`.
pub fn pair_correlation(e1: Energy, e2: Energy) -> f64 {
    EIGHT_PI * (e1.value() * e2.value())
}

/// The definitional three-term form of [`pair_correlation`], evaluated at
/// a particular mass.
pub fn pair_correlation_at(state: &BlackHoleState, e1: Energy, e2: Energy) -> Result<f64> {
    let mass = state.mass();
    let joint = TwoFloat::new(e1.value()) + e2.value();
    check_total(state, joint)?;
    let value = delta_s_exact(mass, joint)
        - delta_s_exact(mass, TwoFloat::new(e1.value()))
        - delta_s_exact(mass, TwoFloat::new(e2.value()));
    Ok(value.to_f64())
}

pub fn bh_entropy(state: &BlackHoleState) -> f64 {
    state.bh_entropy()
}

/// Ordered emissions from a hole of given initial mass, with the
/// remaining-mass trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionSequence {
    initial_mass: f64,
    energies: Vec<Energy>,
    remaining_masses: Vec<f64>,
    remaining_exact: Vec<TwoFloat>,
}

impl EmissionSequence {
    pub fn new(initial_mass: f64, energies: Vec<Energy>) -> Result<Self> {
        let state = BlackHoleState::new(initial_mass)?;
        let floor = DEGENERATE_FRACTION * initial_mass;
        let mut remaining = TwoFloat::new(initial_mass);
        let mut remaining_exact = Vec::with_capacity(energies.len() + 1);
        let mut remaining_masses = Vec::with_capacity(energies.len() + 1);
        remaining_exact.push(remaining);
        remaining_masses.push(initial_mass);
        let last = energies.len().saturating_sub(1);
        for (index, e) in energies.iter().enumerate() {
            let energy = e.value();
            if energy <= 0.0 {
                return Err(Error::NonPositiveEmission { index, energy });
            }
            if energy < floor {
                return Err(Error::DegenerateEmission {
                    index,
                    energy,
                    floor,
                });
            }
            remaining = remaining - energy;
            let value = remaining.to_f64();
            let overdrawn = if index == last {
                value < -SUM_TOLERANCE * initial_mass
            } else {
                value <= 0.0
            };
            if overdrawn {
                let total: TwoFloat = energies.iter().map(|e| e.value()).sum();
                return Err(Error::EmissionsExceedInitialMass {
                    total: total.to_f64(),
                    mass: state.mass(),
                });
            }
            remaining_exact.push(remaining);
            remaining_masses.push(value.max(0.0));
        }
        Ok(EmissionSequence {
            initial_mass,
            energies,
            remaining_masses,
            remaining_exact,
        })
    }

    pub fn from_values(initial_mass: f64, energies: &[f64]) -> Result<Self> {
        Self::new(initial_mass, Energy::list(energies)?)
    }

    pub fn initial_mass(&self) -> f64 {
        self.initial_mass
    }

    pub fn energies(&self) -> &[Energy] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// `remaining_masses()[0]` is the initial mass; entry `i + 1` is the
    /// mass left after emission `i`.
    pub fn remaining_masses(&self) -> &[f64] {
        &self.remaining_masses
    }

    pub(crate) fn remaining_exact(&self) -> &[TwoFloat] {
        &self.remaining_exact
    }

    pub fn total_energy(&self) -> f64 {
        (TwoFloat::new(self.initial_mass) - *self.remaining_exact.last().unwrap()).to_f64()
    }

    pub fn final_mass(&self) -> f64 {
        *self.remaining_masses.last().unwrap()
    }

    /// True when the energies sum to the initial mass within `1e-12·M`.
    pub fn is_exhausting(&self) -> bool {
        self.remaining_exact.last().unwrap().to_f64().abs() <= SUM_TOLERANCE * self.initial_mass
    }
}
