use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed record in a CSV input. `row` is 1-based and counts the header.
    #[error("{source_name}: parse error at row {row}, column {column}: {message}")]
    Parse {
        source_name: String,
        row: usize,
        column: String,
        message: String,
    },

    #[error("{source_name}: row {row}: field `{field}` {message}")]
    InvalidRecord {
        source_name: String,
        row: usize,
        field: String,
        message: String,
    },

    #[error("duplicate species name `{0}`")]
    DuplicateSpecies(String),

    #[error("invalid input `{name}` = {value}: {reason}")]
    InvalidInput {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "penetration depth is singular at aircraft_speed = 0; \
         use the stationary-aircraft model instead"
    )]
    StationarySingularity,

    #[error("unknown scenario parameter `{0}`")]
    UnknownParameter(String),

    #[error("base force is zero; percent change is undefined")]
    ZeroBaseForce,

    #[error("theoretical force is zero; percent error is undefined")]
    ZeroTheoreticalForce,

    #[error("root finding did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("root is not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("unknown projectile serial {0}")]
    UnknownProjectile(u8),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("unknown scenario id `{0}`")]
    UnknownScenario(String),

    #[error("duplicate scenario id `{0}`")]
    DuplicateScenario(String),

    #[error("scenario `{0}` has no theoretical reference")]
    MissingReference(String),

    #[error("scenario `{0}` has no measured impact velocities")]
    MissingMeasuredVelocity(String),

    #[error("scenario `{0}` has no measurements")]
    MissingMeasurements(String),

    #[error("scenario `{id}`: expected {expected} iterations, found {found}")]
    IterationCount {
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("measurement set is empty")]
    EmptyMeasurements,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Rejects NaN and values at or below zero.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

pub(crate) fn ensure_fraction(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidInput {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}
