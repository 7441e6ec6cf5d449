//! Run manifests: every output file either embeds one or gets a sidecar
//! `<file>.manifest.json`. Re-running the same parameters reproduces the
//! numeric payload bit for bit; only the timestamps differ.

use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: Vec<String>,
}

pub struct ManifestBuilder {
    command: String,
    parameters: serde_json::Value,
    seed: Option<u64>,
    started_at: String,
}

impl ManifestBuilder {
    pub fn new(command: &str, parameters: serde_json::Value, seed: Option<u64>) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            parameters,
            seed,
            started_at: now(),
        }
    }

    pub fn finish(self, outputs: Vec<String>) -> RunManifest {
        RunManifest {
            command: self.command,
            parameters: self.parameters,
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_at: self.started_at,
            finished_at: now(),
            outputs,
        }
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Writes `<path>.manifest.json` next to a non-JSON output file.
pub fn write_sidecar(path: &Path, manifest: &RunManifest) -> std::io::Result<()> {
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".manifest.json");
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    std::fs::write(sidecar, text + "\n")
}
