use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use adaptkry::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record of one CLI run, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    /// Input path -> hex SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub timings: BTreeMap<String, f64>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn new(command: &str, config: serde_json::Value, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            config,
            seed,
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            timings: BTreeMap::new(),
            started: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        let mut file = fs::File::open(path).map_err(|e| io_err(path, e))?;
        let mut hasher = Sha256::new();
        let mut buf = vec![0u8; 1 << 16];
        loop {
            let read = file.read(&mut buf).map_err(|e| io_err(path, e))?;
            if read == 0 {
                break;
            }
            hasher.update(&buf[..read]);
        }
        self.inputs
            .insert(path.display().to_string(), hex::encode(hasher.finalize()));
        Ok(())
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Stores the seconds elapsed since `since` under `name`.
    pub fn time(&mut self, name: &str, since: Instant) {
        self.timings.insert(name.to_string(), since.elapsed().as_secs_f64());
    }

    pub fn write(mut self, path: &Path) -> Result<PathBuf> {
        if let Some(start) = self.started.take() {
            self.time("total_seconds", start);
        }
        let text = serde_json::to_string_pretty(&self).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(path, text + "\n").map_err(|e| io_err(path, e))?;
        Ok(path.to_path_buf())
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `<out>.manifest.json` next to a file output.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}
