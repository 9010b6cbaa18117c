//! Atomic file output and the run manifest.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::params::{format_config, DerivedParams, SystemConfig};

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestFile {
    pub path: String,
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub command: String,
    pub seconds: f64,
}

/// Record of one CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub config: Option<String>,
    pub derived: Option<DerivedParams>,
    pub timing: Vec<Timing>,
    pub warnings: Vec<String>,
    pub files: Vec<ManifestFile>,
    pub presets: Vec<(String, f64)>,
    pub checks: Vec<crate::analysis::ShapeCheck>,
}

impl RunManifest {
    pub fn new(command: &str) -> RunManifest {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: None,
            derived: None,
            timing: Vec::new(),
            warnings: Vec::new(),
            files: Vec::new(),
            presets: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn with_config(&mut self, cfg: &SystemConfig, derived: Option<DerivedParams>) {
        self.config = Some(format_config(cfg));
        self.derived = derived;
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }
}

/// Where results go: stdout, or files in a directory plus `manifest.json`.
pub struct Sink {
    pub dir: Option<PathBuf>,
    pub manifest: RunManifest,
}

impl Sink {
    /// Emits one CSV. Without an output directory it goes to stdout.
    pub fn emit(&mut self, stem: &str, description: &str, csv: &str) -> io::Result<()> {
        match &self.dir {
            Some(d) => {
                let name = format!("{stem}.csv");
                write_atomic(&d.join(&name), csv)?;
                self.manifest
                    .files
                    .push(ManifestFile { path: name, description: description.to_string() });
                Ok(())
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(csv.as_bytes())
            }
        }
    }

    pub fn finish(&self) -> io::Result<()> {
        if let Some(d) = &self.dir {
            let json = serde_json::to_string_pretty(&self.manifest).map_err(io::Error::other)?;
            write_atomic(&d.join("manifest.json"), &(json + "\n"))?;
        }
        Ok(())
    }
}
