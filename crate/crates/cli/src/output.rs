use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Writes a file by filling a temporary sibling and renaming it into place.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// What a command did, recorded next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub artifacts: Vec<PathBuf>,
    pub tool_version: String,
    pub duration_secs: f64,
}

/// Collects artifact paths while a command runs, then writes `manifest.json`.
pub struct Run {
    command: &'static str,
    out: PathBuf,
    started: Instant,
    artifacts: Vec<PathBuf>,
}

impl Run {
    pub fn start(command: &'static str, out: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(out)?;
        Ok(Self { command, out: out.to_path_buf(), started: Instant::now(), artifacts: Vec::new() })
    }

    pub fn path(&self, name: impl AsRef<Path>) -> PathBuf {
        self.out.join(name)
    }

    pub fn write<F>(&mut self, name: impl AsRef<Path>, fill: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
    {
        let path = self.path(name);
        write_atomic(&path, fill)?;
        self.artifacts.push(path.clone());
        Ok(path)
    }

    pub fn record(&mut self, path: PathBuf) {
        self.artifacts.push(path);
    }

    pub fn finish<C: Serialize>(self, config: &C, seeds: Vec<u64>) -> Result<PathBuf, CliError> {
        let manifest = RunManifest {
            command: self.command.to_string(),
            argv: std::env::args().collect(),
            config: serde_json::to_value(config)?,
            seeds,
            artifacts: self.artifacts,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            duration_secs: self.started.elapsed().as_secs_f64(),
        };
        let path = self.out.join("manifest.json");
        write_atomic(&path, |w| Ok(serde_json::to_writer_pretty(&mut *w, &manifest)?))?;
        Ok(path)
    }
}
