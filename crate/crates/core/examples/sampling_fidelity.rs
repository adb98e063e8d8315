//! Inverse-transform sampling checked against the analytic CDF.

use tunnelinfo::ks::ks_test;
use tunnelinfo::montecarlo::{first_emissions, InverseTransform};
use tunnelinfo::{sample_emission, RngStream, SpectrumModel};

fn main() -> tunnelinfo::Result<()> {
    let mut rng = RngStream::new(42, 0);
    let a = sample_emission(10.0, &mut rng)?;
    rng.reset();
    let b = sample_emission(10.0, &mut rng)?;
    println!("seed 42, stream 0: {} and again {}", a.value(), b.value());

    for m in [0.1, 1.0, 10.0] {
        let samples = first_emissions(m, 7, 10_000, &InverseTransform)?;
        let ks = ks_test(&samples, &SpectrumModel::new(m)?)?;
        let mean = samples.iter().map(|e| e.value()).sum::<f64>() / samples.len() as f64;
        println!(
            "m = {m:<4}: KS {:.5} (5% critical {:.5}), sample mean {:.6e}, analytic {:.6e}",
            ks.statistic,
            ks.critical_value_5pct(),
            mean,
            SpectrumModel::new(m)?.mean_energy()
        );
    }
    Ok(())
}
