//! The normalized emission spectrum: density, CDF, quantiles and the mean
//! against the Hawking temperature.
//!
//! cargo run --example spectrum_table -- [mass]

use tunnelinfo::{Energy, SpectrumModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mass: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1.0);
    let model = SpectrumModel::new(mass)?;
    println!(
        "m = {mass}: Z = {:.12e}, ln Z = {:.12}",
        model.normalizer(),
        model.log_normalizer()
    );

    println!("{:>12} {:>14} {:>14}", "E", "density", "cdf");
    for i in 0..=10 {
        let e = Energy::new(mass * (i as f64 / 10.0).powi(2))?;
        println!(
            "{:>12.6} {:>14.6e} {:>14.12}",
            e.value(),
            model.density(e)?,
            model.cdf(e)?
        );
    }

    for u in [0.01, 0.5, 0.99] {
        println!("quantile({u}) = {:.12e}", model.quantile(u)?.value());
    }
    println!(
        "mean = {:.12e}, T_H = 1/(8πm) = {:.12e}",
        model.mean_energy(),
        model.hawking_temperature()
    );
    Ok(())
}
