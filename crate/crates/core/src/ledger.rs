//! Chain-rule entropy accounting for a sequence of emissions.
//!
//! Each emission contributes its conditional self-information
//! `H(Ei | Ei-1, ..., E1) = -ln P(Ei | Ei-1, ..., E1) = 8πEi(mi - Ei/2)`,
//! with `mi` the mass left before the emission. The terms telescope to
//! `4π(M² - m_final²)`, so every exhausting sequence carries exactly the
//! Bekenstein–Hawking entropy `4πM²`, whatever the partition.

use std::f64::consts::{LN_2, PI};

use crate::compensated::{NeumaierSum, TwoFloat};
use crate::error::Result;
use crate::tunneling::{BlackHoleState, EmissionSequence, Energy, EIGHT_PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LedgerEntry {
    /// 1-based position in the sequence.
    pub index: usize,
    pub energy: Energy,
    pub remaining_mass_before: f64,
    /// In nats.
    pub conditional_self_info: f64,
}

impl LedgerEntry {
    pub fn conditional_self_info_bits(&self) -> f64 {
        self.conditional_self_info / LN_2
    }

    pub fn remaining_mass_after(&self) -> f64 {
        (self.remaining_mass_before - self.energy.value()).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyLedger {
    initial_mass: f64,
    entries: Vec<LedgerEntry>,
    total: f64,
    target: f64,
    exhausting: bool,
}

/// Outcome of [`verify_conservation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    pub is_exhausting: bool,
    pub total: f64,
    pub target: f64,
    /// `|total - 4πM²| / 4πM²`; `None` for a partial ledger.
    pub relative_residual: Option<f64>,
}

impl ConservationReport {
    /// True for an exhausting ledger whose residual is within `tolerance`.
    pub fn conserves(&self, tolerance: f64) -> bool {
        matches!(self.relative_residual, Some(r) if r <= tolerance)
    }
}

/// Builds the ledger for `energies` emitted from a hole of `initial_mass`.
pub fn build_ledger(initial_mass: f64, energies: &[Energy]) -> Result<EntropyLedger> {
    let sequence = EmissionSequence::new(initial_mass, energies.to_vec())?;
    Ok(EntropyLedger::from_sequence(&sequence))
}

/// `4π(M² - m_final²)`, the telescoped total of a (possibly partial)
/// ledger.
pub fn partial_entropy(initial_mass: f64, energies: &[Energy]) -> Result<f64> {
    let sequence = EmissionSequence::new(initial_mass, energies.to_vec())?;
    Ok(telescoped_total(&sequence))
}

fn telescoped_total(sequence: &EmissionSequence) -> f64 {
    // M² - m² = S(2M - S) with S the emitted total
    let mass = sequence.initial_mass();
    let emitted = TwoFloat::new(mass)
        - *sequence
            .remaining_exact()
            .last()
            .expect("non-empty trajectory");
    let twice_mass_less = TwoFloat::new(2.0 * mass) - emitted;
    (emitted * twice_mass_less * (0.5 * EIGHT_PI)).to_f64()
}

pub fn verify_conservation(ledger: &EntropyLedger) -> ConservationReport {
    ConservationReport {
        is_exhausting: ledger.exhausting,
        total: ledger.total,
        target: ledger.target,
        relative_residual: ledger.relative_residual(),
    }
}

impl EntropyLedger {
    pub fn from_sequence(sequence: &EmissionSequence) -> Self {
        let remaining = sequence.remaining_exact();
        let mut total = NeumaierSum::new();
        let entries: Vec<LedgerEntry> = sequence
            .energies()
            .iter()
            .zip(remaining)
            .enumerate()
            .map(|(i, (&energy, &before))| {
                let e = energy.value();
                let info = ((before - 0.5 * e) * (EIGHT_PI * e)).to_f64();
                total += info;
                LedgerEntry {
                    index: i + 1,
                    energy,
                    remaining_mass_before: before.to_f64(),
                    conditional_self_info: info,
                }
            })
            .collect();
        let mass = sequence.initial_mass();
        EntropyLedger {
            initial_mass: mass,
            entries,
            total: total.total(),
            target: 4.0 * PI * mass * mass,
            exhausting: sequence.is_exhausting(),
        }
    }

    pub fn initial_mass(&self) -> f64 {
        self.initial_mass
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    /// Compensated sum of the entries' conditional self-information, nats.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn total_bits(&self) -> f64 {
        self.total / LN_2
    }

    /// `4πM²`.
    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn is_exhausting(&self) -> bool {
        self.exhausting
    }

    /// `total - target`, defined only for exhausting ledgers.
    pub fn residual(&self) -> Option<f64> {
        self.exhausting.then_some(self.total - self.target)
    }

    pub fn relative_residual(&self) -> Option<f64> {
        self.residual().map(|r| r.abs() / self.target)
    }

    pub fn state(&self) -> BlackHoleState {
        BlackHoleState::new(self.initial_mass).expect("validated at construction")
    }
}
