use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::ExperimentConfig;
use crate::plot::render_svg;
use crate::runner::{SummaryRow, TrialRecord};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
}

fn write_err(path: &Path, e: impl std::fmt::Display) -> OutputError {
    OutputError::Write { path: path.display().to_string(), message: e.to_string() }
}

const RECORD_HEADER: [&str; 11] = [
    "trial_id",
    "scheme",
    "sweep_value",
    "worst_secrecy_rate_bits",
    "p1",
    "p2",
    "eve_metric_db",
    "bob_metric_db",
    "status",
    "iterations",
    "runtime_ms",
];

/// Record CSV as bytes. The header is written even with no records.
pub fn records_csv(records: &[TrialRecord]) -> Result<Vec<u8>, String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(RECORD_HEADER).map_err(|e| e.to_string())?;
    for r in records {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

pub fn summary_csv(rows: &[SummaryRow]) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.into_inner().map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub records: PathBuf,
    pub summary: PathBuf,
    pub plot: PathBuf,
}

impl OutputPaths {
    pub fn in_dir(dir: &Path, name: &str) -> Self {
        Self {
            records: dir.join(format!("{name}.csv")),
            summary: dir.join(format!("{name}_summary.csv")),
            plot: dir.join(format!("{name}.svg")),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), OutputError> {
    let mut f = fs::File::create(path).map_err(|e| write_err(path, e))?;
    f.write_all(bytes).map_err(|e| write_err(path, e))
}

/// Writes the record CSV, the summary CSV and the SVG plot.
pub fn emit_outputs(cfg: &ExperimentConfig, records: &[TrialRecord], summary: &[SummaryRow], paths: &OutputPaths) -> Result<(), OutputError> {
    if let Some(dir) = paths.records.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| write_err(dir, e))?;
    }
    write_file(&paths.records, &records_csv(records).map_err(|e| write_err(&paths.records, e))?)?;
    write_file(&paths.summary, &summary_csv(summary).map_err(|e| write_err(&paths.summary, e))?)?;
    write_file(&paths.plot, render_svg(cfg, summary).as_bytes())
}
