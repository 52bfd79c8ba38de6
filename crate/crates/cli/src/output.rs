//! Tabular output: CSV and JSON renderings of the same records, atomic
//! file writes, and the sidecar metadata file.
//!
//! Floats are formatted at 17 significant digits so every CSV
//! round-trips bit-exactly; nothing time-dependent goes into the data
//! file, so identical configurations produce byte-identical output.

use crate::CliError;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::usage(format!(
                "format must be `csv` or `json`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone)]
pub enum Cell {
    F(f64),
    S(String),
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits: exact f64 round-trip.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::F(v) => fmt_f(*v),
                    // keep the CSV free of embedded separators
                    Cell::S(s) => s.replace(',', ";"),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::F(v) => json!(v),
                        Cell::S(s) => json!(s),
                    };
                    obj.insert((*col).to_string(), v);
                }
                Value::Object(obj)
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&Value::Array(records)).expect("valid json");
        text.push('\n');
        text
    }
}

/// Write via a temp file in the destination directory plus rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::io(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::io(format!("creating temp file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path)
        .map_err(|e| CliError::io(format!("renaming into {}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Sidecar `<output>.meta.json` describing the run; parameters only, no
/// timestamps, so metadata is as reproducible as the data.
pub fn write_sidecar(path: &Path, command: &str, params: Value) -> Result<(), CliError> {
    let meta = json!({
        "tool": "ptzeno",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "params": params,
    });
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    let sidecar = path.with_file_name(name);
    let mut text = serde_json::to_string_pretty(&meta).expect("valid json");
    text.push('\n');
    write_atomic(&sidecar, &text)
}
