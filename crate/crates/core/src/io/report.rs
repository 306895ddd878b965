//! TOML documents for monitor reports and calibrated constants.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::monitor::{CalibratedConstants, MonitorReport};

/// A monitor report with the hash of the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    /// Hex SHA-256 of the configuration text.
    pub config_sha256: String,
    pub report: MonitorReport,
}

impl ReportDocument {
    pub fn new(config_text: &str, report: MonitorReport) -> Self {
        ReportDocument {
            config_sha256: config_hash(config_text),
            report,
        }
    }
}

pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| Error::arg("document", format!("cannot serialize: {e}")))
}

pub fn write_toml<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_toml(value)?).map_err(|e| Error::io(path, e))
}

pub fn read_toml<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })
}

pub fn write_report(doc: &ReportDocument, path: impl AsRef<Path>) -> Result<()> {
    write_toml(doc, path)
}

pub fn read_report(path: impl AsRef<Path>) -> Result<ReportDocument> {
    read_toml(path)
}

pub fn write_constants(constants: &CalibratedConstants, path: impl AsRef<Path>) -> Result<()> {
    write_toml(constants, path)
}

/// Reads and validates a constants file.
pub fn read_constants(path: impl AsRef<Path>) -> Result<CalibratedConstants> {
    let constants: CalibratedConstants = read_toml(path)?;
    constants.validate()?;
    Ok(constants)
}
