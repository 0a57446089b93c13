//! Tabular output with `#` metadata lines, and the JSON envelope.

use std::fs;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Command;
use crate::CliError;

pub const TOOL: &str = concat!("solvchaos ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra `# key: value` lines after the standard ones.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
    }

    pub fn to_csv(&self, cfg: &Command, seed: u64) -> Result<String, CliError> {
        let mut out = metadata(cfg, seed)?;
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn to_json(&self, cfg: &Command, seed: u64) -> Result<String, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect()))
            .collect();
        envelope(cfg, seed, json!({ "notes": self.notes, "rows": rows }))
    }
}

pub fn metadata(cfg: &Command, seed: u64) -> Result<String, CliError> {
    Ok(format!("# tool: {TOOL}\n# config: {}\n# seed: {seed}\n", serde_json::to_string(cfg)?))
}

/// `{"tool", "config", "seed", "result"}`, pretty-printed.
pub fn envelope(cfg: &Command, seed: u64, result: impl Serialize) -> Result<String, CliError> {
    let v = json!({ "tool": TOOL, "config": cfg, "seed": seed, "result": result });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn emit(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => io::stdout().lock().write_all(content.as_bytes())?,
    }
    Ok(())
}
