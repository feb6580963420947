use std::fs;
use std::path::Path;

use modburgers::{FitConfig, SimConfig, StopReason};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const DETERMINISM: &str =
    "runs use no random numbers; identical manifests produce byte-identical outputs";

/// Output file names, relative to the directory holding the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Outputs {
    pub trace: String,
    pub sidecar: String,
}

/// Everything needed to reproduce a run and its analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub schema_version: u32,
    pub config: SimConfig,
    pub fit: FitConfig,
    pub determinism: String,
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunSummary {
    pub stop: StopReason,
    pub steps: usize,
    pub records: usize,
    pub sign_warnings: usize,
    pub final_time: Option<f64>,
    pub final_xi: Option<f64>,
}

/// JSON written next to every trace. A sidecar is also a valid manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Sidecar {
    #[serde(flatten)]
    pub manifest: RunManifest,
    pub run: RunSummary,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(io_error(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let manifest: RunManifest = read_json(path)?;
    if manifest.schema_version != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "{}: schema version {} is not supported (expected {SCHEMA_VERSION})",
            path.display(),
            manifest.schema_version
        )));
    }
    Ok(manifest)
}
