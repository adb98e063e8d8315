//! Monte Carlo evaporation: inverse-transform sampling of emission energies
//! from the normalized spectrum at the current remaining mass, one
//! independent random stream per run, and an entropy ledger for every
//! sampled path.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compensated::{NeumaierSum, TwoFloat};
use crate::error::{check_finite, Error, Result};
use crate::ledger::EntropyLedger;
use crate::rng::RngStream;
use crate::spectrum::SpectrumModel;
use crate::tunneling::{EmissionSequence, Energy, DEGENERATE_FRACTION};

/// Default cutoff, as a fraction of the initial mass.
pub const DEFAULT_CUTOFF_FRACTION: f64 = 1e-6;
pub const DEFAULT_MAX_EMISSIONS: u64 = 10_000_000;
/// Relative tolerance for pathwise conservation.
pub const CONSERVATION_TOLERANCE: f64 = 1e-12;

const MAX_REDRAWS: usize = 64;

/// Source of single emissions at a given remaining mass.
pub trait EmissionSampler: Sync {
    fn sample(&self, remaining_mass: f64, rng: &mut RngStream) -> Result<Energy>;
}

/// Inverse-transform sampling from [`SpectrumModel`].
#[derive(Debug, Clone, Copy, Default)]
pub struct InverseTransform;

impl EmissionSampler for InverseTransform {
    fn sample(&self, remaining_mass: f64, rng: &mut RngStream) -> Result<Energy> {
        let model = SpectrumModel::new(remaining_mass)?;
        model.quantile(rng.next_open_unit())
    }
}

/// One draw from the normalized spectrum at mass `m`.
pub fn sample_emission(m: f64, rng: &mut RngStream) -> Result<Energy> {
    InverseTransform.sample(m, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub initial_mass: f64,
    pub cutoff_mass: f64,
    pub max_emissions: u64,
    pub runs: u64,
    pub seed: u64,
}

impl SimulationConfig {
    /// Config with the default cutoff (`1e-6·M`) and emission cap.
    pub fn new(initial_mass: f64, runs: u64, seed: u64) -> Self {
        SimulationConfig {
            initial_mass,
            cutoff_mass: DEFAULT_CUTOFF_FRACTION * initial_mass,
            max_emissions: DEFAULT_MAX_EMISSIONS,
            runs,
            seed,
        }
    }

    pub fn with_cutoff(mut self, cutoff_mass: f64) -> Self {
        self.cutoff_mass = cutoff_mass;
        self
    }

    pub fn with_max_emissions(mut self, max_emissions: u64) -> Self {
        self.max_emissions = max_emissions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("initial mass", self.initial_mass)?;
        check_finite("cutoff mass", self.cutoff_mass)?;
        if self.initial_mass <= 0.0 {
            return Err(Error::NonPositiveMass(self.initial_mass));
        }
        if !(self.cutoff_mass > 0.0 && self.cutoff_mass < self.initial_mass) {
            return Err(Error::InvalidConfig(format!(
                "cutoff mass {} must lie in (0, {})",
                self.cutoff_mass, self.initial_mass
            )));
        }
        if self.max_emissions == 0 {
            return Err(Error::InvalidConfig("max_emissions must be >= 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be >= 1".into()));
        }
        Ok(())
    }

    pub fn stream(&self, run: u64) -> RngStream {
        RngStream::new(self.seed, run)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub run_id: u64,
    pub sequence: EmissionSequence,
    pub ledger: EntropyLedger,
    pub emission_count: usize,
    /// The run reached the cutoff and ended with an emission of the whole
    /// remaining mass.
    pub final_exhaustive_flag: bool,
    pub wall_time: Duration,
}

impl RunResult {
    pub fn conserves(&self) -> bool {
        matches!(self.ledger.relative_residual(), Some(r) if r <= CONSERVATION_TOLERANCE)
    }

    /// Equality of everything except the wall time.
    pub fn same_path(&self, other: &RunResult) -> bool {
        self.run_id == other.run_id
            && self.sequence == other.sequence
            && self.ledger == other.ledger
            && self.final_exhaustive_flag == other.final_exhaustive_flag
    }
}

pub fn simulate_evaporation(config: &SimulationConfig, stream: RngStream) -> Result<RunResult> {
    simulate_evaporation_with(config, stream, &InverseTransform)
}

/// Samples at the current remaining mass and subtracts until the mass is
/// at most `cutoff_mass` (then emits the rest in one quantum) or
/// `max_emissions` draws have been made.
pub fn simulate_evaporation_with<S: EmissionSampler + ?Sized>(
    config: &SimulationConfig,
    mut stream: RngStream,
    sampler: &S,
) -> Result<RunResult> {
    config.validate()?;
    let run = stream.stream_id();
    let wrap = |source: Error| Error::Run {
        run,
        source: Box::new(source),
    };
    let start = Instant::now();
    let mass = config.initial_mass;
    let floor = DEGENERATE_FRACTION * mass;
    let mut remaining = TwoFloat::new(mass);
    let mut energies = Vec::new();

    while remaining.to_f64() > config.cutoff_mass && (energies.len() as u64) < config.max_emissions
    {
        let m = remaining.to_f64();
        let mut e = sample_above_floor(sampler, m, floor, &mut stream).map_err(wrap)?;
        if e >= m {
            return Err(wrap(Error::EmissionExceedsMass { energy: e, mass: m }));
        }
        if m - e < floor {
            e = m;
        }
        energies.push(Energy::new(e).map_err(wrap)?);
        remaining = remaining - e;
    }
    let reached_cutoff = remaining.to_f64() <= config.cutoff_mass;
    if reached_cutoff && remaining.to_f64() > 0.0 {
        energies.push(Energy::new(remaining.to_f64()).map_err(wrap)?);
    }

    let sequence = EmissionSequence::new(mass, energies).map_err(wrap)?;
    let ledger = EntropyLedger::from_sequence(&sequence);
    Ok(RunResult {
        run_id: run,
        emission_count: sequence.len(),
        final_exhaustive_flag: reached_cutoff,
        sequence,
        ledger,
        wall_time: start.elapsed(),
    })
}

fn sample_above_floor<S: EmissionSampler + ?Sized>(
    sampler: &S,
    m: f64,
    floor: f64,
    stream: &mut RngStream,
) -> Result<f64> {
    for _ in 0..MAX_REDRAWS {
        let e = sampler.sample(m, stream)?.value();
        if e >= floor {
            return Ok(e);
        }
    }
    Err(Error::InvalidConfig(format!(
        "sampler returned {MAX_REDRAWS} consecutive emissions below {floor}"
    )))
}

/// Runs `config.runs` independent evaporations in parallel; run `i` uses
/// stream `(seed, i)`, so the result is identical to [`run_ensemble_serial`].
pub fn run_ensemble(config: &SimulationConfig) -> Result<Vec<RunResult>> {
    run_ensemble_with(config, &InverseTransform)
}

pub fn run_ensemble_with<S: EmissionSampler + ?Sized>(
    config: &SimulationConfig,
    sampler: &S,
) -> Result<Vec<RunResult>> {
    config.validate()?;
    (0..config.runs)
        .into_par_iter()
        .map(|run| simulate_evaporation_with(config, config.stream(run), sampler))
        .collect()
}

pub fn run_ensemble_serial(config: &SimulationConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    (0..config.runs)
        .map(|run| simulate_evaporation(config, config.stream(run)))
        .collect()
}

/// First emission of runs `0..n`, without simulating the rest of each path.
/// Identical to `run.sequence.energies()[0]` of the corresponding runs.
pub fn first_emissions<S: EmissionSampler + ?Sized>(
    initial_mass: f64,
    seed: u64,
    n: u64,
    sampler: &S,
) -> Result<Vec<Energy>> {
    (0..n)
        .into_par_iter()
        .map(|run| sampler.sample(initial_mass, &mut RngStream::new(seed, run)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub runs: usize,
    pub exhaustive_runs: usize,
    pub count_mean: f64,
    pub count_stddev: f64,
    pub first_emission_mean: f64,
    pub first_emission_stderr: f64,
    /// Over exhaustive runs; `None` when no run was exhaustive.
    pub max_relative_residual: Option<f64>,
    pub ledger_totals: Vec<f64>,
}

impl EnsembleStats {
    pub fn all_conserve(&self, tolerance: f64) -> bool {
        self.max_relative_residual.is_none_or(|r| r <= tolerance)
    }
}

fn mean_and_stddev(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().copied().collect::<NeumaierSum>().total() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .collect::<NeumaierSum>()
        .total();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn ensemble_stats(results: &[RunResult]) -> Result<EnsembleStats> {
    if results.is_empty() {
        return Err(Error::Empty("ensemble results"));
    }
    let counts: Vec<f64> = results.iter().map(|r| r.emission_count as f64).collect();
    let firsts: Vec<f64> = results
        .iter()
        .filter_map(|r| r.sequence.energies().first().map(|e| e.value()))
        .collect();
    let (count_mean, count_stddev) = mean_and_stddev(&counts);
    let (first_emission_mean, first_sd) = if firsts.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        mean_and_stddev(&firsts)
    };
    let max_relative_residual = results
        .iter()
        .filter_map(|r| r.ledger.relative_residual())
        .reduce(f64::max);
    Ok(EnsembleStats {
        runs: results.len(),
        exhaustive_runs: results.iter().filter(|r| r.final_exhaustive_flag).count(),
        count_mean,
        count_stddev,
        first_emission_mean,
        first_emission_stderr: first_sd / (firsts.len() as f64).sqrt(),
        max_relative_residual,
        ledger_totals: results.iter().map(|r| r.ledger.total()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sample_is_reproducible() {
        let mut rng = RngStream::new(42, 0);
        let a = sample_emission(10.0, &mut rng).unwrap();
        rng.reset();
        let b = sample_emission(10.0, &mut rng).unwrap();
        assert_eq!(a, b);
        assert!(a.value() > 0.0 && a.value() < 10.0);
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::new(1.0, 1, 0).validate().is_ok());
        assert!(SimulationConfig::new(1.0, 1, 0)
            .with_cutoff(0.0)
            .validate()
            .is_err());
        assert!(SimulationConfig::new(1.0, 1, 0)
            .with_cutoff(1.0)
            .validate()
            .is_err());
        assert!(SimulationConfig::new(1.0, 1, 0)
            .with_max_emissions(0)
            .validate()
            .is_err());
        assert!(SimulationConfig::new(1.0, 0, 0).validate().is_err());
        assert!(SimulationConfig::new(-1.0, 1, 0).validate().is_err());
    }

    #[test]
    fn exhaustive_run_conserves() {
        let config = SimulationConfig::new(2.0, 1, 7);
        let run = simulate_evaporation(&config, config.stream(0)).unwrap();
        assert!(run.final_exhaustive_flag);
        assert!(run.sequence.is_exhausting());
        assert!(run.conserves());
        assert!((run.ledger.total() - 16.0 * PI).abs() < 1e-9);
        let masses = run.sequence.remaining_masses();
        for w in masses.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(masses[..masses.len() - 1].iter().all(|&m| m > 0.0));
        assert_eq!(*masses.last().unwrap(), 0.0);
    }

    #[test]
    fn truncated_run() {
        let config = SimulationConfig::new(1.0, 1, 3).with_max_emissions(1);
        let run = simulate_evaporation(&config, config.stream(0)).unwrap();
        assert_eq!(run.emission_count, 1);
        assert!(!run.final_exhaustive_flag);
        assert!(!run.ledger.is_exhausting());
        assert_eq!(run.ledger.relative_residual(), None);
    }

    #[test]
    fn parallel_matches_serial() {
        let config = SimulationConfig::new(1.5, 8, 11);
        let par = run_ensemble(&config).unwrap();
        let ser = run_ensemble_serial(&config).unwrap();
        assert_eq!(par.len(), ser.len());
        for (a, b) in par.iter().zip(&ser) {
            assert!(a.same_path(b));
        }
    }

    #[test]
    fn first_emissions_match_runs() {
        let config = SimulationConfig::new(1.0, 5, 99);
        let runs = run_ensemble(&config).unwrap();
        let firsts = first_emissions(1.0, 99, 5, &InverseTransform).unwrap();
        for (run, first) in runs.iter().zip(firsts) {
            assert_eq!(run.sequence.energies()[0], first);
        }
    }

    #[test]
    fn stats_single_run() {
        let config = SimulationConfig::new(1.0, 1, 5);
        let runs = run_ensemble(&config).unwrap();
        let stats = ensemble_stats(&runs).unwrap();
        assert_eq!(stats.runs, 1);
        assert_eq!(stats.count_mean, runs[0].emission_count as f64);
        assert_eq!(stats.count_stddev, 0.0);
        assert_eq!(
            stats.first_emission_mean,
            runs[0].sequence.energies()[0].value()
        );
        assert_eq!(stats.ledger_totals, vec![runs[0].ledger.total()]);
        assert!(ensemble_stats(&[]).is_err());
    }

    struct Overshoot;

    impl EmissionSampler for Overshoot {
        fn sample(&self, m: f64, _: &mut RngStream) -> Result<Energy> {
            Energy::new(m * 1.5)
        }
    }

    #[test]
    fn bad_sampler_reports_run() {
        let config = SimulationConfig::new(1.0, 3, 0);
        let err = run_ensemble_with(&config, &Overshoot).unwrap_err();
        assert!(matches!(err, Error::Run { .. }));
    }

    struct Stuck;

    impl EmissionSampler for Stuck {
        fn sample(&self, _: f64, _: &mut RngStream) -> Result<Energy> {
            Energy::new(1e-30)
        }
    }

    #[test]
    fn degenerate_sampler_is_rejected() {
        let config = SimulationConfig::new(1.0, 1, 0);
        assert!(simulate_evaporation_with(&config, config.stream(0), &Stuck).is_err());
    }
}
