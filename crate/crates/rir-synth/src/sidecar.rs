//! Per-response metadata sidecars.
//!
//! Every generated WAV gets a JSON sidecar binding the requested parameters
//! to what was actually measured, so a dataset stays auditable file by file.
//! Field order is fixed by the struct definitions and maps serialize sorted,
//! which keeps rewritten sidecars diff-friendly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::MeasuredParams;
use crate::params::RirParams;

/// Bumped when the sidecar layout changes; readers ignore unknown fields.
pub const SIDECAR_SCHEMA_VERSION: u32 = 1;

/// Version string embedded in sidecars and manifests.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Whether a stored response holds energies or signed amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RirMode {
    Energetic,
    Pressure,
}

impl std::fmt::Display for RirMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RirMode::Energetic => write!(f, "energetic"),
            RirMode::Pressure => write!(f, "pressure"),
        }
    }
}

/// Everything recorded about one generated response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RirRecord {
    pub schema_version: u32,
    pub tool_version: String,
    /// WAV file name, relative to the sidecar's directory.
    pub file: String,
    pub mode: RirMode,
    /// Gain applied before writing, in dB (0 when written as generated).
    pub applied_gain_db: f64,
    pub requested: RirParams,
    /// Present only when the response was measured after generation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<MeasuredRecord>,
}

impl RirRecord {
    pub fn new(file: impl Into<String>, mode: RirMode, requested: RirParams) -> Self {
        Self {
            schema_version: SIDECAR_SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            file: file.into(),
            mode,
            applied_gain_db: 0.0,
            requested,
            measured: None,
        }
    }

    pub fn with_measured(mut self, measured: &MeasuredParams) -> Self {
        self.measured = Some(MeasuredRecord::from(measured));
        self
    }
}

/// Measured acoustic parameters; failed estimators leave their value out and
/// record the reason under `errors` instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MeasuredRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rt60_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edt_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drr_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub itdg_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_quality: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub errors: BTreeMap<String, String>,
}

impl From<&MeasuredParams> for MeasuredRecord {
    fn from(measured: &MeasuredParams) -> Self {
        let mut record = MeasuredRecord::default();
        match &measured.rt60 {
            Ok(estimate) => {
                record.rt60_s = Some(estimate.seconds);
                record.fit_quality = Some(estimate.fit_quality);
            }
            Err(err) => {
                record.errors.insert("rt60".into(), err.to_string());
            }
        }
        match &measured.edt {
            Ok(seconds) => record.edt_s = Some(*seconds),
            Err(err) => {
                record.errors.insert("edt".into(), err.to_string());
            }
        }
        match &measured.drr_db {
            Ok(db) => record.drr_db = Some(*db),
            Err(err) => {
                record.errors.insert("drr".into(), err.to_string());
            }
        }
        match &measured.itdg {
            Ok(seconds) => record.itdg_s = Some(*seconds),
            Err(err) => {
                record.errors.insert("itdg".into(), err.to_string());
            }
        }
        record
    }
}

/// Writes the record as pretty-printed JSON next to its WAV.
pub fn write_sidecar(record: &RirRecord, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(record)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_sidecar(path: impl AsRef<Path>) -> Result<RirRecord> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
