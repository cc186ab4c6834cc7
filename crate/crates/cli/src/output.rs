use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flat rows with a fixed header list; every command's CSV goes through here.
pub struct Table {
    pub headers: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &'static [&'static str]) -> Self {
        Self { headers, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip representation, exponent form for tiny or huge magnitudes;
/// NaN (no value) prints empty.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:?}")
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn text<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub struct Rendered {
    pub json: serde_json::Value,
    pub table: Table,
    pub default_format: Format,
    pub breach: bool,
}

impl Rendered {
    pub fn new<T: Serialize>(json: &T, table: Table, default_format: Format) -> Result<Self> {
        Ok(Self {
            json: serde_json::to_value(json).context("serializing output")?,
            table,
            default_format,
            breach: false,
        })
    }
}

pub fn write(r: &Rendered, format: Option<Format>, out: Option<&Path>) -> Result<()> {
    let mut buf = Vec::new();
    match format.unwrap_or(r.default_format) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &r.json)?;
            buf.push(b'\n');
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(r.table.headers)?;
            for row in &r.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    match out {
        Some(p) => std::fs::write(p, &buf).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().lock().write_all(&buf).context("writing stdout"),
    }
}
