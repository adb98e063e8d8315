//! Chain-rule ledger of an exhausting emission sequence.
//!
//! Whatever the split, the conditional self-information adds up to 4πM².

use tunnelinfo::{build_ledger, verify_conservation, Energy, RngStream};

fn main() -> tunnelinfo::Result<()> {
    let mass = 2.0;
    let ledger = build_ledger(mass, &Energy::list(&[1.0, 0.5, 0.5])?)?;
    for entry in ledger.entries() {
        println!(
            "E{} = {:<4} at m = {:<4} -> {:>10.6} nats ({:.6} bits)",
            entry.index,
            entry.energy.value(),
            entry.remaining_mass_before,
            entry.conditional_self_info,
            entry.conditional_self_info_bits()
        );
    }
    println!(
        "total {:.12}, target {:.12}",
        ledger.total(),
        ledger.target()
    );

    let mut rng = RngStream::new(5, 0);
    for len in [10usize, 1_000, 100_000] {
        let weights: Vec<f64> = (0..len).map(|_| rng.next_open_unit()).collect();
        let sum: f64 = weights.iter().sum();
        let parts: Vec<f64> = weights.iter().map(|w| mass * w / sum).collect();
        let report = verify_conservation(&build_ledger(mass, &Energy::list(&parts)?)?);
        println!(
            "{len:>7} random pieces: total {:.12}, relative residual {:?}",
            report.total, report.relative_residual
        );
    }

    // a partial sequence has no target to meet
    let partial = build_ledger(mass, &Energy::list(&[0.5, 0.25])?)?;
    println!(
        "partial: total {:.6}, residual {:?}",
        partial.total(),
        partial.residual()
    );
    Ok(())
}
