//! JSON manifest written next to simulation output.

use serde::{Deserialize, Serialize};

use crate::montecarlo::{EnsembleStats, SimulationConfig};

/// Bumped whenever a manifest field or a CSV column changes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: String,
    pub command: String,
    pub parameters: SimulationConfig,
    pub seed: u64,
    pub code_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<String>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: usize,
    pub exhaustive_runs: usize,
    /// Mean ledger total over exhaustive runs.
    pub ledger_total: Option<f64>,
    pub ledger_totals: Vec<f64>,
    /// `4πM²`.
    pub target: f64,
    pub max_relative_residual: Option<f64>,
    pub conserved: bool,
    pub emission_counts: Vec<usize>,
    pub emission_count_mean: f64,
    pub emission_count_stddev: f64,
    pub first_emission_mean: f64,
}

impl Summary {
    pub fn new(
        stats: &EnsembleStats,
        exhaustive_totals: &[f64],
        counts: Vec<usize>,
        target: f64,
        conserved: bool,
    ) -> Self {
        let ledger_total = (!exhaustive_totals.is_empty()).then(|| {
            exhaustive_totals
                .iter()
                .copied()
                .collect::<crate::compensated::NeumaierSum>()
                .total()
                / exhaustive_totals.len() as f64
        });
        Summary {
            runs: stats.runs,
            exhaustive_runs: stats.exhaustive_runs,
            ledger_total,
            ledger_totals: stats.ledger_totals.clone(),
            target,
            max_relative_residual: stats.max_relative_residual,
            conserved,
            emission_counts: counts,
            emission_count_mean: stats.count_mean,
            emission_count_stddev: stats.count_stddev,
            first_emission_mean: stats.first_emission_mean,
        }
    }
}
