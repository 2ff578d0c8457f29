//! CSV artifacts with JSON metadata sidecars.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;

/// Writes artifacts into one output directory; every file gets a `<file>.meta.json` sidecar.
pub struct ArtifactWriter {
    dir: PathBuf,
    config: Value,
    started: Instant,
    files: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        fs::create_dir_all(&config.output)
            .with_context(|| format!("creating output directory {}", config.output.display()))?;
        Ok(Self {
            dir: config.output.clone(),
            config: serde_json::to_value(config)?,
            started: Instant::now(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn files(&self) -> &[PathBuf] {
        &self.files
    }

    pub fn into_files(self) -> Vec<PathBuf> {
        self.files
    }

    /// Writes `contents` to `name` and its sidecar with an experiment-specific `summary`.
    pub fn write(&mut self, name: &str, contents: &[u8], summary: Value) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        let meta = json!({
            "file": name,
            "experiment": self.config["experiment"],
            "seed": self.config["seed"],
            "version": env!("CARGO_PKG_VERSION"),
            "elapsed_seconds": self.started.elapsed().as_secs_f64(),
            "config": self.config,
            "summary": summary,
        });
        let meta_path = self.dir.join(format!("{name}.meta.json"));
        fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")
            .with_context(|| format!("writing {}", meta_path.display()))?;
        self.files.push(path);
        self.files.push(meta_path);
        Ok(())
    }

    pub fn write_csv<R: Serialize>(&mut self, name: &str, header: &[&str], rows: &[R], summary: Value) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().context("flushing CSV")?;
        self.write(name, &bytes, summary)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T, summary: Value) -> Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        self.write(name, text.as_bytes(), summary)
    }
}
