use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("Prodi-Serrin constraint violated for (r = {r}, s = {s}): {constraint}")]
    PairConstraint { r: f64, s: f64, constraint: String },

    #[error("time step {dt:e} exceeds the CFL limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("non-finite field at t = {t}: last finite |grad u| = {grad_u_norm:e}")]
    BlowUp { t: f64, grad_u_norm: f64 },

    #[error("insufficient snapshots: need at least {needed}, got {got}")]
    InsufficientSnapshots { needed: usize, got: usize },

    #[error("snapshot times are not strictly increasing at index {index} (t = {t})")]
    NonMonotoneTime { index: usize, t: f64 },

    #[error("degenerate field family: {0}")]
    DegenerateFamily(String),

    #[error("nonpositive constant `{name}` = {value}")]
    NonpositiveConstant { name: &'static str, value: f64 },

    #[error(transparent)]
    Snapshot(#[from] crate::io::SnapshotError),

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Parse { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn arg(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
