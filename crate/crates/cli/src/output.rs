//! Deterministic batch output: CSV rows and a JSON report.
//!
//! Row order is fully determined by the config (no map iteration order,
//! no timestamps), and numbers are written with shortest-roundtrip
//! formatting, so identical configs and seeds produce byte-identical
//! files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use qbound_core::sym::SymMatrix;

/// One output record: a scalar belonging to (scenario, N, quantity, index).
#[derive(Debug, Clone, Serialize)]
pub struct OutputRow {
    pub scenario_id: String,
    pub n: u64,
    pub quantity: String,
    pub index: u64,
    pub value: f64,
    pub method: String,
}

/// Rows for the ascending eigenvalues of a symmetric matrix.
pub fn eigenvalue_rows(
    scenario_id: &str,
    n: u64,
    quantity: &str,
    method: &str,
    m: &SymMatrix,
) -> anyhow::Result<Vec<OutputRow>> {
    let eigs = m.eigenvalues()?;
    Ok(eigs
        .iter()
        .enumerate()
        .map(|(i, &value)| OutputRow {
            scenario_id: scenario_id.to_string(),
            n,
            quantity: quantity.to_string(),
            index: i as u64,
            value,
            method: method.to_string(),
        })
        .collect())
}

/// A single scalar row.
pub fn scalar_row(
    scenario_id: &str,
    n: u64,
    quantity: &str,
    method: &str,
    value: f64,
) -> OutputRow {
    OutputRow {
        scenario_id: scenario_id.to_string(),
        n,
        quantity: quantity.to_string(),
        index: 0,
        value,
        method: method.to_string(),
    }
}

/// Write rows as CSV with a fixed header.
pub fn write_csv<W: Write>(sink: W, rows: &[OutputRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[OutputRow]) -> anyhow::Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(file, rows)
}

/// JSON report: quantities keyed deterministically (BTreeMap).
#[derive(Debug, Default, Serialize)]
pub struct JsonReport {
    pub scenario_id: String,
    pub entries: BTreeMap<String, serde_json::Value>,
}

impl JsonReport {
    pub fn new(scenario_id: &str) -> Self {
        Self {
            scenario_id: scenario_id.to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn put_matrix(&mut self, key: &str, m: &SymMatrix) {
        let rows: Vec<Vec<f64>> = (0..m.dim())
            .map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect())
            .collect();
        self.entries
            .insert(key.to_string(), serde_json::json!(rows));
    }

    pub fn put_scalar(&mut self, key: &str, v: f64) {
        self.entries.insert(key.to_string(), serde_json::json!(v));
    }

    pub fn put_text(&mut self, key: &str, v: &str) {
        self.entries.insert(key.to_string(), serde_json::json!(v));
    }

    pub fn write_file(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

/// Least-squares line fit on pre-transformed coordinates, returning
/// (slope, intercept, max absolute residual).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> anyhow::Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        anyhow::bail!("line fit needs at least two matched points");
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        anyhow::bail!("degenerate abscissae in line fit");
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    Ok((slope, intercept, residual))
}
