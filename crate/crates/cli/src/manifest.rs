//! Run manifests: a small JSON record written next to every output file
//! group, listing what was run and what it produced.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Reproducibility record for one file-writing run. Rerunning the command
/// with the recorded parameters must reproduce every listed output
/// byte-identically; the manifest itself is the one file exempt from that
/// contract (it carries the wall-clock timestamp).
#[derive(Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: &'static str,
    /// Flag values as given (or defaulted) on the command line.
    pub parameters: BTreeMap<&'static str, Value>,
    pub tool_version: &'static str,
    /// RFC 3339, UTC.
    pub timestamp: String,
    /// Numerical tolerances in force during the run.
    pub tolerances: BTreeMap<&'static str, f64>,
    /// Every file the run wrote, in write order (manifest excluded).
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        RunManifest {
            schema: 1,
            command,
            parameters: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339(),
            tolerances: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn parameter(mut self, name: &'static str, value: impl Into<Value>) -> Self {
        self.parameters.insert(name, value.into());
        self
    }

    pub fn tolerance(mut self, name: &'static str, value: f64) -> Self {
        self.tolerances.insert(name, value);
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.display().to_string());
        self
    }

    /// Write the manifest as `<anchor>.manifest.json`.
    pub fn write_next_to(&self, anchor: &Path) -> io::Result<PathBuf> {
        let mut name = anchor.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, body + "\n")?;
        Ok(path)
    }
}
