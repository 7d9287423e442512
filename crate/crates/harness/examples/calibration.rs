//! How often the Gaussian tail bound is exceeded over many starting
//! guesses, and the sample mean against the expectation bound.

use rsvd_diag::bounds::Quantity;
use rsvd_diag::{NormSpec, TestMatrixSpec};
use rsvd_diag_harness::{sweep, Experiment, ExperimentConfig};

fn main() {
    let seeds = 40;
    let config = ExperimentConfig {
        matrices: vec![TestMatrixSpec::preset("GapLarge", 0).unwrap()],
        q: vec![0, 1],
        seeds: (0..seeds).collect(),
        norm_specs: vec![NormSpec::Spectral],
        delta: 0.1,
        experiments: vec![Experiment::ProbabilisticCalibration],
        ..ExperimentConfig::default()
    };
    let outcomes = sweep(&config, None);
    for q in [0, 1] {
        let reports: Vec<_> = outcomes.iter().filter(|o| o.key.q == q).filter_map(|o| o.report()).collect();
        let exceeded = reports
            .iter()
            .filter(|r| r.entries_for(Quantity::ProbTailTheta).any(|e| e.measured > e.bound))
            .count();
        let k = config.k[0];
        let mean = reports.iter().map(|r| r.entry(Quantity::ProbExpectationTheta, k).unwrap().measured).sum::<f64>()
            / reports.len() as f64;
        let first = reports[0];
        println!(
            "q={q}: tail bound exceeded in {exceeded}/{} runs (delta = {}); mean sin theta_k {mean:.4}, expectation bound {:.4}, tail bound {:.4}",
            reports.len(),
            config.delta,
            first.entry(Quantity::ProbExpectationTheta, k).unwrap().bound,
            first.entry(Quantity::ProbTailTheta, k).unwrap().bound,
        );
    }
}
