//! Long-format CSV of bound entries, and re-checking a stored CSV.

use std::path::Path;

use anyhow::{Context, Result};
use rsvd_diag::bounds::{BoundEntry, Direction, Quantity, MASTER_SLACK};
use rsvd_diag::NormSpec;
use serde::{Deserialize, Serialize};

use crate::runner::RunOutcome;

pub const CSV_HEADER: [&str; 10] = [
    "matrix", "k", "rho", "q", "seed", "quantity", "j", "measured", "bound", "norm_spec",
];

/// One bound entry of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub matrix: String,
    pub k: usize,
    pub rho: usize,
    pub q: usize,
    pub seed: u64,
    pub quantity: Quantity,
    pub j: Option<usize>,
    #[serde(with = "float_exp")]
    pub measured: f64,
    #[serde(with = "float_exp")]
    pub bound: f64,
    pub norm_spec: Option<NormSpec>,
}

/// Floats as shortest round-trip scientific notation, so the CSV is exact
/// and stable across runs.
mod float_exp {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&format_args!("{x:e}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl CsvRow {
    /// Rows for every completed run, in sweep order then report order.
    pub fn from_outcomes(outcomes: &[RunOutcome]) -> Vec<CsvRow> {
        outcomes
            .iter()
            .filter_map(|o| o.report().map(|r| (o, r)))
            .flat_map(|(o, r)| r.entries.iter().map(move |e| CsvRow::new(o, e)))
            .collect()
    }

    fn new(o: &RunOutcome, e: &BoundEntry) -> Self {
        CsvRow {
            matrix: o.key.matrix.clone(),
            k: o.key.k,
            rho: o.key.rho,
            q: o.key.q,
            seed: o.key.seed,
            quantity: e.quantity,
            j: e.j,
            measured: e.measured,
            bound: e.bound,
            norm_spec: e.norm,
        }
    }

    /// Signed distance to violation; negative means violated.
    pub fn slack(&self) -> f64 {
        match self.quantity.direction() {
            Direction::Lower => self.measured - self.bound,
            _ => self.bound - self.measured,
        }
    }
}

pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    if rows.is_empty() {
        w.write_record(CSV_HEADER)?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    anyhow::ensure!(header == CSV_HEADER, "unexpected CSV header {header:?}");
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.with_context(|| format!("CSV row {}", i + 2)))
        .collect()
}

/// Result of re-verifying the master property on stored rows.
#[derive(Debug, Clone)]
pub struct CheckSummary {
    pub rows: usize,
    /// Rows with an upper or lower deterministic bound.
    pub checked: usize,
    pub violations: Vec<CsvRow>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_rows(rows: &[CsvRow], tol: f64) -> CheckSummary {
    let deterministic: Vec<&CsvRow> = rows
        .iter()
        .filter(|r| matches!(r.quantity.direction(), Direction::Upper | Direction::Lower))
        .collect();
    CheckSummary {
        rows: rows.len(),
        checked: deterministic.len(),
        violations: deterministic.into_iter().filter(|r| !(r.slack() >= -tol)).cloned().collect(),
    }
}

pub fn check_csv(path: &Path) -> Result<CheckSummary> {
    Ok(check_rows(&read_csv(path)?, MASTER_SLACK))
}
