use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use frozen_planet::QuadratureConfig;
use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Provenance written next to every result. `wall_time` is the only field
/// that varies between identical invocations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub tool_version: String,
    pub quadrature: QuadratureConfig,
    /// Seconds.
    pub wall_time: f64,
}

impl RunManifest {
    pub fn new(command: &str, quadrature: QuadratureConfig) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            tool_version: TOOL_VERSION.to_string(),
            quadrature,
            wall_time: 0.0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn stamp(&mut self, started: Instant) {
        self.wall_time = started.elapsed().as_secs_f64();
    }
}

/// `results.csv` → `results.csv.manifest.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
