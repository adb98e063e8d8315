//! One-sample Kolmogorov–Smirnov distance against the spectrum CDF.

use crate::error::{Error, Result};
use crate::spectrum::SpectrumModel;
use crate::tunneling::Energy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// `sup |F_n(E) - F(E)|`.
    pub statistic: f64,
    pub n: usize,
}

impl KsResult {
    /// Asymptotic 5% critical value `1.36 / √n`.
    pub fn critical_value_5pct(&self) -> f64 {
        1.36 / (self.n as f64).sqrt()
    }
}

/// KS distance of `samples` to an arbitrary CDF, which must return values
/// in `[0, 1]` and be non-decreasing.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

pub fn ks_test(samples: &[Energy], model: &SpectrumModel) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::Empty("ks_test samples"));
    }
    let m = model.remaining_mass();
    let mut values = Vec::with_capacity(samples.len());
    for (index, e) in samples.iter().enumerate() {
        let value = e.value();
        if !(value > 0.0 && value < m) {
            return Err(Error::SampleOutsideSupport {
                index,
                value,
                mass: m,
            });
        }
        values.push(value);
    }
    let statistic = ks_statistic(&values, |x| {
        model
            .cdf(Energy::new(x).expect("validated"))
            .expect("in support")
    });
    Ok(KsResult {
        statistic,
        n: samples.len(),
    })
}
