//! Run manifests: a JSON record written next to each primary output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::CliResult;
use crate::formats::write_bytes;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub flags: serde_json::Value,
    pub seed: Option<u64>,
    pub versions: BTreeMap<&'static str, &'static str>,
    pub outputs: Vec<PathBuf>,
    pub started_unix_secs: f64,
    pub duration_secs: f64,
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        flags: serde_json::Value,
        seed: Option<u64>,
        started: SystemTime,
        elapsed: Duration,
    ) -> Self {
        let versions = BTreeMap::from([
            ("boxsim", env!("CARGO_PKG_VERSION")),
            ("boxsim-core", boxsim_core::VERSION),
        ]);
        RunManifest {
            subcommand: subcommand.into(),
            flags,
            seed,
            versions,
            outputs: Vec::new(),
            started_unix_secs: started
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs_f64())
                .unwrap_or(0.0),
            duration_secs: elapsed.as_secs_f64(),
        }
    }

    /// `<output>.manifest.json`
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("plain data") + "\n";
        write_bytes(path, text.as_bytes())
    }
}
