//! Result files: `<out>/<command>/<name>.csv` and `<out>/<command>/summary.json`.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};

/// A CSV table with a header of SI-suffixed column names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|v| num(*v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest text that parses back to the same value.
pub fn num(v: f64) -> String {
    v.to_string()
}

pub struct OutputDir {
    dir: PathBuf,
}

impl OutputDir {
    pub fn create(root: &Path, command: &str) -> CliResult<Self> {
        let dir = root.join(command);
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        Ok(Self { dir })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write_table(&self, name: &str, table: &Table) -> CliResult<()> {
        let path = self.dir.join(format!("{name}.csv"));
        let err = |e: csv::Error| CliError::io(format!("writing {}", path.display()), e.into());
        let mut w = csv::Writer::from_path(&path).map_err(err)?;
        w.write_record(&table.header).map_err(err)?;
        for row in &table.rows {
            w.write_record(row).map_err(err)?;
        }
        w.flush().map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }

    pub fn write_summary<M: Serialize>(&self, command: &str, cfg: &RunConfig, metrics: &M) -> CliResult<()> {
        let summary = Summary {
            command,
            config_sha256: config_hash(cfg),
            seed: cfg.seed,
            versions: Versions { spectherm: env!("CARGO_PKG_VERSION"), schema: SCHEMA_VERSION },
            metrics,
        };
        let path = self.dir.join("summary.json");
        let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Numerical(e.to_string()))?;
        std::fs::write(&path, text + "\n").map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }
}

#[derive(Serialize)]
struct Versions {
    spectherm: &'static str,
    schema: u32,
}

#[derive(Serialize)]
struct Summary<'a, M: Serialize> {
    command: &'a str,
    config_sha256: String,
    seed: u64,
    versions: Versions,
    metrics: &'a M,
}

/// SHA-256 of the canonical JSON form of the configuration, with the
/// output directory left out so relocated runs hash identically.
pub fn config_hash(cfg: &RunConfig) -> String {
    let mut c = cfg.clone();
    c.out = None;
    let bytes = serde_json::to_vec(&c).expect("config serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}
