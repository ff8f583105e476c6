//! Output files: one CSV per table, `summary.json` with the resolved config,
//! and a `MANIFEST` of SHA-256 digests.
//!
//! `summary.json` schema (version 1):
//!
//! ```text
//! { "schema_version": 1,
//!   "command": "fig3" | "fig4" | "simulate" | "analytic",
//!   "master_seed": u64,
//!   "config": ExperimentConfig,
//!   "tables": [ { "name", "file", "columns": [..], "rows": n } ],
//!   "notes": [ string ] }
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::table::Table;
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const SUMMARY_FILE: &str = "summary.json";
pub const MANIFEST_FILE: &str = "MANIFEST";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRef {
    pub name: String,
    pub file: String,
    pub columns: Vec<String>,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub command: String,
    pub master_seed: u64,
    pub config: ExperimentConfig,
    pub tables: Vec<TableRef>,
    pub notes: Vec<String>,
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn csv_bytes(table: &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render())).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_csv(table: &Table, dir: &Path) -> Result<PathBuf> {
    let path = dir.join(format!("{}.csv", table.name));
    write(&path, &csv_bytes(table))?;
    Ok(path)
}

/// Parses a CSV written by [`write_csv`] back into header and string rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::io(path, e.into()))?;
    let header = r
        .headers()
        .map_err(|e| Error::io(path, e.into()))?
        .iter()
        .map(String::from)
        .collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::io(path, e.into()))?;
    Ok((header, rows))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes tables, summary and manifest into `dir` (created if missing).
/// Returns the paths written, manifest last.
pub fn persist(
    dir: &Path,
    command: &str,
    cfg: &ExperimentConfig,
    tables: &[&Table],
    notes: &[String],
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut refs = Vec::new();
    for t in tables {
        let path = write_csv(t, dir)?;
        refs.push(TableRef {
            name: t.name.clone(),
            file: format!("{}.csv", t.name),
            columns: t.columns.clone(),
            rows: t.rows.len(),
        });
        written.push(path);
    }
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        command: command.into(),
        master_seed: cfg.master_seed,
        config: cfg.clone(),
        tables: refs,
        notes: notes.to_vec(),
    };
    let path = dir.join(SUMMARY_FILE);
    let json = serde_json::to_vec_pretty(&summary).map_err(|e| Error::Json {
        path: path.clone(),
        source: e,
    })?;
    write(&path, &json)?;
    written.push(path);

    let mut manifest = String::new();
    for p in &written {
        let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
        let name = p.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        manifest.push_str(&format!("{}  {}\n", sha256_hex(&bytes), name));
    }
    let path = dir.join(MANIFEST_FILE);
    write(&path, manifest.as_bytes())?;
    written.push(path);
    Ok(written)
}

pub fn load_summary(path: &Path) -> Result<Summary> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Json {
        path: path.into(),
        source: e,
    })
}

/// Files in `dir/MANIFEST` whose digest no longer matches.
pub fn verify_manifest(dir: &Path) -> Result<Vec<String>> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let mut bad = Vec::new();
    for line in text.lines() {
        let Some((digest, name)) = line.split_once("  ") else {
            bad.push(line.to_string());
            continue;
        };
        let file = dir.join(name);
        let bytes = fs::read(&file).map_err(|e| Error::io(&file, e))?;
        if sha256_hex(&bytes) != digest {
            bad.push(name.to_string());
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::table::Cell;

    fn table() -> Table {
        let mut t = Table::new("demo", &["x", "label"]);
        t.push(vec![Cell::Num(1.0 / 3.0), Cell::text("a, b")]);
        t.push(vec![Cell::Na, Cell::Int(7)]);
        t
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_csv(&table(), dir.path()).unwrap();
        let (h, rows) = read_csv(&p).unwrap();
        assert_eq!(h, ["x", "label"]);
        assert_eq!(rows[0], ["0.333333333", "a, b"]);
        assert_eq!(rows[1], ["na", "7"]);
    }

    #[test]
    fn manifest_matches_and_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::default();
        let files = persist(dir.path(), "demo", &cfg, &[&table()], &[]).unwrap();
        assert_eq!(files.len(), 3);
        assert!(verify_manifest(dir.path()).unwrap().is_empty());
        fs::write(dir.path().join("demo.csv"), "x\n").unwrap();
        assert_eq!(verify_manifest(dir.path()).unwrap(), ["demo.csv"]);
    }

    #[test]
    fn summary_round_trips_config() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = ExperimentConfig::default();
        cfg.traffic.lambda_a = 0.1 + 0.2;
        cfg.master_seed = u64::MAX;
        persist(dir.path(), "demo", &cfg, &[&table()], &["note".into()]).unwrap();
        let s = load_summary(&dir.path().join(SUMMARY_FILE)).unwrap();
        assert_eq!(s.config, cfg);
        assert_eq!(s.schema_version, SCHEMA_VERSION);
        assert_eq!(s.tables[0].rows, 2);
    }

    #[test]
    fn io_errors_carry_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "").unwrap();
        let err = persist(&blocker.join("sub"), "demo", &ExperimentConfig::default(), &[], &[]).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
