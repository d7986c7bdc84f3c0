//! Run manifest: resolved config, regime checks and output checksums.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    /// Path relative to the output directory.
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

impl OutputFile {
    pub fn describe(name: &str, contents: &[u8]) -> Self {
        Self { name: name.to_string(), sha256: sha256_hex(contents), bytes: contents.len() as u64 }
    }
}

/// Regime checks of one gas configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeEntry {
    pub temperature: f64,
    pub horizon: f64,
    pub packet_ratio: f64,
    pub density_ratio: f64,
    pub degeneracy_ratio: f64,
    pub collision_time: f64,
    pub width_match_residual: f64,
    pub mass_ratio: f64,
    pub warnings: Vec<String>,
}

/// What a single fixed collision did to the cat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionSummary {
    pub damping: f64,
    pub collision_phase: f64,
    pub phase_invariant_before: f64,
    pub phase_invariant_after: f64,
    pub antinode_x: f64,
    pub antinode_p: f64,
    /// `1 - W_after / W_before` at the initial antinode.
    pub antinode_change: f64,
    pub measurement_decoherence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub regime: Vec<RegimeEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub collision: Option<CollisionSummary>,
    pub outputs: Vec<OutputFile>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }
}

pub fn sha256_hex(contents: &[u8]) -> String {
    hex::encode(Sha256::digest(contents))
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("manifest is not valid: {0}")]
    Format(#[from] serde_json::Error),
    #[error("checksum mismatch for {}", .0.join(", "))]
    Mismatch(Vec<String>),
}

/// Re-reads `dir/manifest.json` and checks every listed output against its checksum.
pub fn verify_manifest(dir: &Path) -> Result<RunManifest, VerifyError> {
    let read = |name: &str| {
        let path = dir.join(name);
        fs::read(&path).map_err(|source| VerifyError::Read { path: path.display().to_string(), source })
    };
    let manifest: RunManifest = serde_json::from_slice(&read(MANIFEST_FILE)?)?;
    let mut bad = Vec::new();
    for output in &manifest.outputs {
        let contents = read(&output.name)?;
        if OutputFile::describe(&output.name, &contents) != *output {
            bad.push(output.name.clone());
        }
    }
    if bad.is_empty() {
        Ok(manifest)
    } else {
        Err(VerifyError::Mismatch(bad))
    }
}
