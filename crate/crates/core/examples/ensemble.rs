//! Parallel ensemble of evaporations and its summary statistics.
//!
//! cargo run --release --example ensemble -- [mass] [runs]

use std::f64::consts::PI;

use tunnelinfo::{ensemble_stats, run_ensemble, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mass: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(10.0);
    let runs: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(100);

    let config = SimulationConfig::new(mass, runs, 1);
    let results = run_ensemble(&config)?;
    let stats = ensemble_stats(&results)?;
    println!("{} runs, {} exhaustive", stats.runs, stats.exhaustive_runs);
    println!(
        "emissions per run: {:.1} ± {:.1}",
        stats.count_mean, stats.count_stddev
    );
    println!(
        "  4πM² = {:.1}, 8πM² = {:.1}",
        4.0 * PI * mass * mass,
        8.0 * PI * mass * mass
    );
    println!(
        "first emission: {:.6e} ± {:.1e}",
        stats.first_emission_mean, stats.first_emission_stderr
    );
    println!(
        "max relative ledger residual: {:?}",
        stats.max_relative_residual
    );
    Ok(())
}
