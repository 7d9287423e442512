//! A small sweep written to a temporary directory, then re-checked from
//! the stored CSV.

use rsvd_diag::{NormSpec, TestMatrixSpec};
use rsvd_diag_harness::output::check_csv;
use rsvd_diag_harness::{run, Experiment, ExperimentConfig, RunOptions};

fn main() -> anyhow::Result<()> {
    let out = std::env::temp_dir().join("rsvd-diag-sweep");
    let config = ExperimentConfig {
        matrices: vec![
            TestMatrixSpec::preset("GapLarge", 0).unwrap().with_size(60, 8),
            TestMatrixSpec::preset("NoiseMedium", 0).unwrap().with_size(60, 8),
        ],
        k: vec![8],
        rho: vec![6],
        q: vec![0, 1, 2],
        seeds: vec![0, 1, 2],
        norm_specs: vec![NormSpec::Spectral, NormSpec::FROBENIUS, NormSpec::KyFan(3)],
        experiments: vec![Experiment::AnglesNoExtraction, Experiment::LowrankErrors],
        output_dir: out.clone(),
        ..ExperimentConfig::default()
    };
    let manifest = run(&config, &RunOptions::default())?;
    println!("config sha256 {}", manifest.config_sha256);
    println!("{} runs, {} completed, {} skipped", manifest.runs_total, manifest.runs_completed, manifest.skipped.len());
    for f in manifest.files.iter().filter(|f| !f.starts_with("reports/")) {
        println!("  {}", out.join(f).display());
    }
    let check = check_csv(&out.join("results.csv"))?;
    println!("{} rows, {} deterministic bounds, {} violations", check.rows, check.checked, check.violations.len());
    Ok(())
}
