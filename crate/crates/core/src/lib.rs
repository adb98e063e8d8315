//! Information accounting for black-hole evaporation viewed as quantum
//! tunneling through the horizon of a Schwarzschild hole.
//!
//! A quantum of energy `E` leaves a hole of mass `M` with probability
//! `exp(-8πE(M - E/2))`. Taken at face value, that weight makes successive
//! emissions correlated: the log-probability of a third emission depends on
//! the first by exactly `8πE₁E₃`, and the conditional self-information of
//! the emissions of any path that exhausts the hole sums to the
//! Bekenstein–Hawking entropy `4πM²`.
//!
//! All quantities are in natural units (`k = ħ = c = G = 1`), entropies in
//! nats.
//!
//! * [`tunneling`]: exact (unnormalized) log-probabilities, conditionals,
//!   the Markov-violation and pair-correlation identities.
//! * [`ledger`]: chain-rule entropy ledgers and conservation reports.
//! * [`spectrum`]: the normalized per-emission spectrum, built on
//!   [`dawson`].
//! * [`montecarlo`]: seeded evaporation runs, ensembles and statistics.
//! * [`ks`], [`quadrature`]: the goodness-of-fit and numerical references
//!   used by [`verify`] and the test suites.
//! * [`cli`]: the `tunnelinfo` command-line frontend.

pub mod cli;
pub mod compensated;
pub mod dawson;
pub mod error;
pub mod ks;
pub mod ledger;
pub mod montecarlo;
pub mod quadrature;
pub mod reference;
pub mod rng;
pub mod spectrum;
pub mod tunneling;
pub mod verify;

pub use error::{Error, Result};
pub use ledger::{
    build_ledger, partial_entropy, verify_conservation, ConservationReport, EntropyLedger,
    LedgerEntry,
};
pub use montecarlo::{
    ensemble_stats, run_ensemble, sample_emission, simulate_evaporation, EmissionSampler,
    EnsembleStats, RunResult, SimulationConfig,
};
pub use rng::RngStream;
pub use spectrum::SpectrumModel;
pub use tunneling::{
    bh_entropy, conditional_log_prob, delta_s, joint_log_prob, markov_violation, pair_correlation,
    BlackHoleState, EmissionSequence, Energy, LogProb,
};
