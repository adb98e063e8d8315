use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant except [`Error::Io`] is a domain error: the inputs fall
/// outside the mathematical domain of the requested operation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("energy must be non-negative, got {0}")]
    NegativeEnergy(f64),

    #[error("emission exceeds remaining mass: energy {energy} > mass {mass}")]
    EmissionExceedsMass { energy: f64, mass: f64 },

    #[error("emissions exceed initial mass: total {total} > mass {mass}")]
    EmissionsExceedInitialMass { total: f64, mass: f64 },

    #[error("emission {index} has non-positive energy {energy}")]
    NonPositiveEmission { index: usize, energy: f64 },

    #[error("emission {index} has degenerate energy {energy} (below {floor})")]
    DegenerateEmission {
        index: usize,
        energy: f64,
        floor: f64,
    },

    #[error("energy {energy} outside support [0, {mass}]")]
    OutsideSupport { energy: f64, mass: f64 },

    #[error("sample {index} = {value} outside open support (0, {mass})")]
    SampleOutsideSupport { index: usize, value: f64, mass: f64 },

    #[error("probability level {0} outside the open interval (0, 1)")]
    LevelOutOfRange(f64),

    #[error("dawson argument must be non-negative and finite, got {0}")]
    DawsonDomain(f64),

    #[error("quantile did not converge for u = {u} at mass {mass} after {iterations} iterations")]
    QuantileNoConvergence {
        u: f64,
        mass: f64,
        iterations: usize,
    },

    #[error("run {run}: {source}")]
    Run {
        run: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
