//! One seeded evaporation from mass M to the cutoff.
//!
//! cargo run --release --example evaporation_run -- [mass] [seed]

use tunnelinfo::{simulate_evaporation, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mass: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5.0);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let config = SimulationConfig::new(mass, 1, seed);
    let run = simulate_evaporation(&config, config.stream(0))?;
    let masses = run.sequence.remaining_masses();
    println!("{} emissions in {:?}", run.emission_count, run.wall_time);
    for k in [0, 1, 2, run.emission_count / 2, run.emission_count - 1] {
        let e = run.sequence.energies()[k];
        println!(
            "  #{:<6} m = {:.9e}  E = {:.9e}",
            k + 1,
            masses[k],
            e.value()
        );
    }
    println!(
        "ledger total {:.12} vs 4πM² {:.12} (relative residual {:?})",
        run.ledger.total(),
        run.ledger.target(),
        run.ledger.relative_residual()
    );

    let truncated = simulate_evaporation(&config.with_max_emissions(10), config.stream(0))?;
    println!(
        "capped at 10 emissions: exhaustive = {}, remaining mass {:.9}",
        truncated.final_exhaustive_flag,
        truncated.sequence.final_mass()
    );
    Ok(())
}
