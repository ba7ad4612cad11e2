//! Run manifests: the resolved parameters that reproduce an output file.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

/// Everything needed to reproduce an output apart from the timestamp.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub parameters: BTreeMap<&'static str, Value>,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &'static str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters: BTreeMap::new(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn param<T: Serialize>(mut self, key: &'static str, value: T) -> Self {
        let value = serde_json::to_value(value).expect("manifest parameters serialize to JSON");
        if !value.is_null() {
            self.parameters.insert(key, value);
        }
        self
    }

    /// Writes the manifest as `#` comment lines, one parameter per line.
    pub fn write_comments<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# {} {} {}", self.tool, self.version, self.subcommand)?;
        writeln!(out, "# timestamp: {}", self.timestamp)?;
        for (key, value) in &self.parameters {
            writeln!(out, "# {key}: {value}")?;
        }
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        let mut file = io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(&mut file, self)?;
        writeln!(file)?;
        file.flush()
    }
}

/// `<output>.manifest.json` for a single-file output.
pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
