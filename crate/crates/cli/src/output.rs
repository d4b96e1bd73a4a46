use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::Context;
use clap::ValueEnum;
use serde::Serialize;

use crate::Exit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Writes `bytes` to the file, or to stdout when no file is given.
pub fn emit(target: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Exit> {
    let res = match target {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().lock().write_all(bytes).context("writing to stdout"),
    };
    res.map_err(|e| Exit::new(1, format!("{e:#}")))
}

pub fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, Exit> {
    let mut s = serde_json::to_vec_pretty(value).map_err(|e| Exit::new(1, e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

pub fn csv_table<T: Serialize>(rows: &[T], header: &[&str]) -> Result<Vec<u8>, Exit> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let fail = |e: csv::Error| Exit::new(1, e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.serialize(r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| Exit::new(1, e.to_string()))
}
