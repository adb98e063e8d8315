//! Invariant suites run by `tunnelinfo verify`.
//!
//! Every check records the worst deviation it saw together with the
//! threshold it was held to, so a report shows how much margin each
//! identity has, not only whether it passed.

use std::fmt;
use std::str::FromStr;

use crate::dawson::dawson;
use crate::error::{Error, Result};
use crate::ks::ks_test;
use crate::ledger::build_ledger;
use crate::montecarlo::{first_emissions, EmissionSampler};
use crate::reference;
use crate::rng::RngStream;
use crate::spectrum::SpectrumModel;
use crate::tunneling::{
    conditional_log_prob, conditional_log_prob_closed_form, delta_s, joint_log_prob,
    markov_violation, pair_correlation, pair_correlation_at, BlackHoleState, Energy, EIGHT_PI,
};

pub const IDENTITY_TOLERANCE: f64 = 1e-12;
pub const DAWSON_TOLERANCE: f64 = 1e-13;
pub const NORMALIZER_TOLERANCE: f64 = 1e-10;
pub const MEAN_TOLERANCE: f64 = 1e-10;
pub const CDF_TOLERANCE: f64 = 1e-9;
pub const ROUND_TRIP_TOLERANCE: f64 = 1e-9;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;
pub const KS_THRESHOLD: f64 = 0.02;
pub const KS_SAMPLES: u64 = 10_000;
pub const MEAN_SAMPLES: u64 = 100_000;
/// Seed of the sampling checks.
pub const ACCEPTANCE_SEED: u64 = 20_240_601;

/// Mass grid of the spectrum checks.
pub const MASS_GRID: [f64; 6] = [0.01, 0.1, 1.0, 5.0, 10.0, 30.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Spectrum,
    Sampling,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "identities" => Ok(Suite::Identities),
            "spectrum" => Ok(Suite::Spectrum),
            "sampling" => Ok(Suite::Sampling),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite '{other}' (expected identities, spectrum, sampling or all)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `worst <= threshold` (and `worst` is not NaN).
    fn at_most(name: &'static str, worst: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check {
            name,
            worst,
            threshold,
            passed: worst <= threshold,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:<28} worst {:.3e} (limit {:.1e})  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.threshold,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, sampler: &dyn EmissionSampler) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.extend(identity_checks()?);
    }
    if matches!(suite, Suite::Spectrum | Suite::All) {
        checks.extend(spectrum_checks()?);
    }
    if matches!(suite, Suite::Sampling | Suite::All) {
        checks.extend(sampling_checks(sampler)?);
    }
    Ok(VerifyReport { checks })
}

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn energy(v: f64) -> Energy {
    Energy::new(v).expect("generated energies are valid")
}

/// Strictly positive weights normalized to sum to `total`.
pub fn random_partition(rng: &mut RngStream, len: usize, total: f64) -> Vec<f64> {
    let weights: Vec<f64> = (0..len).map(|_| -rng.next_open_unit().ln()).collect();
    let sum: f64 = weights.iter().sum();
    weights.iter().map(|w| total * w / sum).collect()
}

/// 1e4 random admissible `(M, E1, E2, E3)`: worst relative deviation of
/// [`markov_violation`] from `8πE1E3`, and of its value after moving `E2`
/// and `M`.
pub fn markov_sweep(rng: &mut RngStream, trials: usize) -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut worst_shift: f64 = 0.0;
    for _ in 0..trials {
        let mass = 0.1 + 99.9 * rng.next_open_unit();
        let parts = random_partition(rng, 4, mass);
        let (e1, e2, e3) = (energy(parts[0]), energy(parts[1]), energy(parts[2]));
        let state = BlackHoleState::new(mass)?;
        let value = markov_violation(&state, e1, e2, e3)?;
        let exact = EIGHT_PI * e1.value() * e3.value();
        worst = worst.max(rel(value, exact));

        let moved_e2 = energy(parts[1] * rng.next_open_unit());
        let moved_state = BlackHoleState::new(mass * (1.0 + rng.next_open_unit()))?;
        let moved = markov_violation(&moved_state, e1, moved_e2, e3)?;
        worst_shift = worst_shift.max(rel(moved, value));
    }
    Ok((worst, worst_shift))
}

/// Worst relative deviation of the three-term log combination from
/// `8πE1E2` over random inputs, each evaluated at two unrelated masses.
pub fn correlation_sweep(rng: &mut RngStream, trials: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mass = 0.1 + 99.9 * rng.next_open_unit();
        let parts = random_partition(rng, 3, mass);
        let (e1, e2) = (energy(parts[0]), energy(parts[1]));
        let exact = pair_correlation(e1, e2);
        for m in [mass, mass * (1.0 + 10.0 * rng.next_open_unit())] {
            let state = BlackHoleState::new(m)?;
            worst = worst.max(rel(pair_correlation_at(&state, e1, e2)?, exact));
        }
    }
    Ok(worst)
}

/// Worst relative deviation of `joint_log_prob` over random partitions and
/// permutations from `delta_s` of the total.
pub fn partition_sweep(rng: &mut RngStream, trials: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mass = 0.1 + 99.9 * rng.next_open_unit();
        let total = mass * rng.next_open_unit();
        let state = BlackHoleState::new(mass)?;
        let reference = delta_s(&state, energy(total))?.ln();
        let len = 1 + (rng.next_u64() % 50) as usize;
        let mut parts = Energy::list(&random_partition(rng, len, total))?;
        for _ in 0..2 {
            worst = worst.max(rel(joint_log_prob(&state, &parts)?.ln(), reference));
            parts.reverse();
            let k = (rng.next_u64() as usize) % parts.len();
            parts.rotate_left(k);
        }
    }
    Ok(worst)
}

/// Worst relative gap between the Bayes-ratio conditional and its closed
/// form, histories of length up to 20.
pub fn conditional_sweep(rng: &mut RngStream, trials: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mass = 0.1 + 99.9 * rng.next_open_unit();
        let len = (rng.next_u64() % 21) as usize;
        let used = mass * rng.next_open_unit();
        let parts = random_partition(rng, len + 2, used);
        let history = Energy::list(&parts[..len])?;
        let e = energy(parts[len]);
        let state = BlackHoleState::new(mass)?;
        let bayes = conditional_log_prob(&state, &history, e)?.ln();
        let closed = conditional_log_prob_closed_form(&state, &history, e)?.ln();
        worst = worst.max(rel(bayes, closed));
    }
    Ok(worst)
}

/// Worst relative ledger residual over random exhausting partitions.
pub fn conservation_sweep(
    rng: &mut RngStream,
    masses: &[f64],
    partitions: usize,
    max_len: usize,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..partitions {
        let mass = masses[i % masses.len()];
        let len = 1 + (rng.next_u64() as usize) % max_len;
        let parts = Energy::list(&random_partition(rng, len, mass))?;
        let ledger = build_ledger(mass, &parts)?;
        let residual = ledger.relative_residual().ok_or_else(|| {
            Error::InvalidConfig(format!("partition of {mass} was not exhausting"))
        })?;
        worst = worst.max(residual);
    }
    Ok(worst)
}

fn identity_checks() -> Result<Vec<Check>> {
    let mut rng = RngStream::new(ACCEPTANCE_SEED, 1);
    let (markov, shifted) = markov_sweep(&mut rng, 10_000)?;
    let correlation = correlation_sweep(&mut rng, 10_000)?;
    let partition = partition_sweep(&mut rng, 2_000)?;
    let conditional = conditional_sweep(&mut rng, 10_000)?;
    let conservation = conservation_sweep(&mut rng, &[0.5, 1.0, 2.0, 10.0], 1000, 10_000)?;
    Ok(vec![
        Check::at_most(
            "markov_violation = 8πE1E3",
            markov,
            IDENTITY_TOLERANCE,
            "10^4 random triples",
        ),
        Check::at_most(
            "markov invariance (E2, M)",
            shifted,
            IDENTITY_TOLERANCE,
            "E2 and M perturbed",
        ),
        Check::at_most(
            "pair correlation = 8πE1E2",
            correlation,
            IDENTITY_TOLERANCE,
            "10^4 inputs, two masses each",
        ),
        Check::at_most(
            "joint partition invariance",
            partition,
            IDENTITY_TOLERANCE,
            "2000 totals, permuted re-partitions",
        ),
        Check::at_most(
            "conditional Bayes = closed",
            conditional,
            IDENTITY_TOLERANCE,
            "10^4 histories, length <= 20",
        ),
        Check::at_most(
            "pathwise conservation",
            conservation,
            IDENTITY_TOLERANCE,
            "1000 partitions, length <= 10^4",
        ),
    ])
}

fn spectrum_checks() -> Result<Vec<Check>> {
    let mut dawson_worst: f64 = 0.0;
    for i in 0..=1000 {
        let x = 0.05 * i as f64;
        let value = dawson(x)?;
        dawson_worst = dawson_worst.max((value - reference::dawson_quadrature(x).value).abs());
    }

    let mut normalizer: f64 = 0.0;
    let mut cdf: f64 = 0.0;
    let mut mean: f64 = 0.0;
    let mut normalization: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for &m in &MASS_GRID {
        let model = SpectrumModel::new(m)?;
        normalizer = normalizer.max(rel(
            model.log_normalizer(),
            reference::log_normalizer_quadrature(m),
        ));
        mean = mean.max(rel(model.mean_energy(), reference::mean_quadrature(m)));
        normalization = normalization
            .max((reference::total_probability(m, model.log_normalizer()) - 1.0).abs());
        for k in 1..=20 {
            let e = m * (k as f64 / 20.0).powi(3);
            cdf = cdf.max((model.cdf(energy(e))? - reference::cdf_quadrature(m, e)).abs());
        }
        for k in 0..1000 {
            let u = (k as f64 + 0.5) / 1000.0;
            let e = model.quantile(u)?;
            round_trip = round_trip.max((model.cdf(e)? - u).abs());
        }
    }

    let mut hawking: f64 = 0.0;
    for m in [5.0, 10.0, 30.0] {
        let model = SpectrumModel::new(m)?;
        // scaled so that the limit is 1
        hawking = hawking.max((model.mean_energy() * EIGHT_PI * m - 1.0).abs() * m * m);
    }

    Ok(vec![
        Check::at_most(
            "dawson vs quadrature",
            dawson_worst,
            DAWSON_TOLERANCE,
            "x in [0, 50], abs",
        ),
        Check::at_most(
            "ln Z vs quadrature",
            normalizer,
            NORMALIZER_TOLERANCE,
            "mass grid, rel",
        ),
        Check::at_most(
            "cdf vs quadrature",
            cdf,
            CDF_TOLERANCE,
            "mass grid x 20 energies, abs",
        ),
        Check::at_most("mean vs quadrature", mean, MEAN_TOLERANCE, "mass grid, rel"),
        Check::at_most(
            "density integrates to 1",
            normalization,
            NORMALIZATION_TOLERANCE,
            "mass grid",
        ),
        Check::at_most(
            "cdf(quantile(u)) = u",
            round_trip,
            ROUND_TRIP_TOLERANCE,
            "10^3 levels per mass",
        ),
        Check::at_most("m²·|8πm·mean - 1|", hawking, 1.0, "m = 5, 10, 30"),
    ])
}

fn sampling_checks(sampler: &dyn EmissionSampler) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (m, name) in [(1.0, "KS distance, m = 1"), (10.0, "KS distance, m = 10")] {
        let samples = first_emissions(m, ACCEPTANCE_SEED, KS_SAMPLES, sampler)?;
        let model = SpectrumModel::new(m)?;
        let ks = ks_test(&samples, &model)?;
        checks.push(Check::at_most(
            name,
            ks.statistic,
            KS_THRESHOLD,
            format!("N = {}", ks.n),
        ));
    }

    let m = 10.0;
    let samples = first_emissions(m, ACCEPTANCE_SEED, MEAN_SAMPLES, sampler)?;
    let (mean, stderr) = sample_mean_and_stderr(&samples);
    let expected = reference::mean_quadrature(m);
    checks.push(Check::at_most(
        "first-emission mean, M = 10",
        (mean - expected).abs() / stderr,
        3.0,
        format!("mean {mean:.6e} vs {expected:.6e}, in standard errors"),
    ));
    Ok(checks)
}

pub fn sample_mean_and_stderr(samples: &[Energy]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|e| e.value()).sum::<f64>() / n;
    let var = samples
        .iter()
        .map(|e| (e.value() - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!("all".parse::<Suite>(), Ok(Suite::All));
        assert_eq!("identities".parse::<Suite>(), Ok(Suite::Identities));
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn partitions_sum_to_total() {
        let mut rng = RngStream::new(1, 1);
        let p = random_partition(&mut rng, 1000, 3.0);
        assert!(p.iter().all(|&x| x > 0.0));
        assert!((p.iter().sum::<f64>() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nan_fails_a_check() {
        assert!(!Check::at_most("x", f64::NAN, 1.0, "").passed);
    }
}
