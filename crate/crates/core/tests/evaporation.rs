use std::f64::consts::PI;

use tunnelinfo::montecarlo::{first_emissions, run_ensemble_serial, InverseTransform};
use tunnelinfo::reference;
use tunnelinfo::verify::sample_mean_and_stderr;
use tunnelinfo::{
    ensemble_stats, run_ensemble, sample_emission, simulate_evaporation, RngStream,
    SimulationConfig,
};

#[test]
fn same_seed_same_path() {
    let config = SimulationConfig::new(3.0, 1, 42);
    let a = simulate_evaporation(&config, config.stream(0)).unwrap();
    let b = simulate_evaporation(&config, config.stream(0)).unwrap();
    assert!(a.same_path(&b));
    let c = simulate_evaporation(&config, config.stream(1)).unwrap();
    assert!(!a.same_path(&c));
}

#[test]
fn sampled_emission_is_reproducible() {
    let mut rng = RngStream::new(42, 0);
    let first = sample_emission(10.0, &mut rng).unwrap();
    rng.reset();
    assert_eq!(sample_emission(10.0, &mut rng).unwrap(), first);
    assert!(first.value() > 0.0 && first.value() < 10.0);
}

#[test]
fn remaining_mass_strictly_decreases() {
    let config = SimulationConfig::new(5.0, 1, 8);
    let run = simulate_evaporation(&config, config.stream(0)).unwrap();
    let m = run.sequence.remaining_masses();
    assert!(m.windows(2).all(|w| w[1] < w[0]));
    assert!(m[..m.len() - 1].iter().all(|&x| x > 0.0));
    assert_eq!(*m.last().unwrap(), 0.0);
    assert!(run.final_exhaustive_flag && run.conserves());
}

#[test]
fn parallel_ensemble_matches_serial() {
    let config = SimulationConfig::new(4.0, 12, 5);
    let par = run_ensemble(&config).unwrap();
    let ser = run_ensemble_serial(&config).unwrap();
    assert_eq!(par.len(), ser.len());
    assert!(par.iter().zip(&ser).all(|(a, b)| a.same_path(b)));
}

#[test]
fn ensemble_totals_equal_bekenstein_hawking() {
    let config = SimulationConfig::new(10.0, 100, 1);
    let results = run_ensemble(&config).unwrap();
    let stats = ensemble_stats(&results).unwrap();
    let target = 400.0 * PI;
    assert_eq!(stats.exhaustive_runs, 100);
    assert!(stats
        .ledger_totals
        .iter()
        .all(|t| ((t - target) / target).abs() <= 1e-12));
    assert!(stats.max_relative_residual.unwrap() <= 1e-12);
}

// Each emission carries about T = 1/(8πm), so the count follows
// ∫ dm / T = 4πM², plus a cutoff tail of a few dozen.
#[test]
fn emission_count_tracks_bekenstein_hawking_entropy() {
    let config = SimulationConfig::new(10.0, 100, 1);
    let stats = ensemble_stats(&run_ensemble(&config).unwrap()).unwrap();
    let leading = 400.0 * PI;
    assert!(
        stats.count_mean > leading && stats.count_mean < leading + 60.0,
        "{}",
        stats.count_mean
    );
    assert!(stats.count_stddev > 0.0);
}

#[test]
fn first_emission_mean_within_three_standard_errors() {
    let samples = first_emissions(10.0, 99, 100_000, &InverseTransform).unwrap();
    let (mean, se) = sample_mean_and_stderr(&samples);
    assert!((mean - reference::mean_quadrature(10.0)).abs() <= 3.0 * se);
}

#[test]
fn truncated_run_is_partial() {
    let config = SimulationConfig::new(1.0, 1, 0).with_max_emissions(1);
    let run = simulate_evaporation(&config, config.stream(0)).unwrap();
    assert_eq!(run.emission_count, 1);
    assert!(!run.final_exhaustive_flag);
    assert!(run.ledger.residual().is_none());
}
