//! Run manifests: every command leaves a record of what produced its
//! outputs, so a result directory is self-describing.

use crate::error::{io_ctx, Result};
use serde::Serialize;
use std::path::Path;
use std::time::Duration;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// Seed in effect, when the command is randomized.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Resolved configuration after defaults and overrides.
    pub config: serde_json::Value,
    /// Files written, relative to the manifest location.
    pub outputs: Vec<String>,
    pub duration_ms: u128,
}

impl RunManifest {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        config: serde_json::Value,
        outputs: Vec<String>,
        elapsed: Duration,
    ) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            outputs,
            duration_ms: elapsed.as_millis(),
        }
    }

    /// Writes `manifest.json` into the output directory.
    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let path = out_dir.join("manifest.json");
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text + "\n").map_err(io_ctx(&path, "writing"))
    }
}
