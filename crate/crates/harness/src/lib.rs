//! Experiment runner for `rsvd-diag`: sweeps over test matrices and sketch
//! parameters, bound reports as JSON and CSV, SVG figures, and an SVD
//! cache shared across runs.

pub mod cache;
pub mod config;
pub mod output;
pub mod plot;
pub mod runner;

pub use config::{Experiment, ExperimentConfig};
pub use output::{check_csv, CsvRow};
pub use runner::{run, sweep, Manifest, RunKey, RunOptions, RunOutcome};
