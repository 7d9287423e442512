use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rsvd_diag::bounds::{gaussian_constants, required_iterations, singular_ratios};
use rsvd_diag::{ReferenceSvd, TestMatrixSpec};
use rsvd_diag_harness::config::parse_experiments;
use rsvd_diag_harness::output::check_csv;
use rsvd_diag_harness::runner::{dump_matrices, run, RunOptions};
use rsvd_diag_harness::ExperimentConfig;

#[derive(Parser)]
#[command(name = "rsvd-diag", version, about = "Randomized SVD accuracy-bound experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; the built-in default sweep when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the configured test matrices in Matrix Market format.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Seed for every matrix generator.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the full sweep.
    Run {
        #[command(flatten)]
        common: Common,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
        /// Run a single sketch seed instead of the configured list.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated experiment list (overrides the config).
        #[arg(long)]
        experiments: Option<String>,
        /// Also write the matrices under `matrices/`.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Re-verify the deterministic bounds in a stored results.csv.
    Check {
        /// results.csv, or a run directory containing it.
        path: PathBuf,
    },
    /// Print C_e, C_d and the iteration count needed for a target accuracy.
    Constants {
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        rho: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        /// Target accuracy for the iteration count.
        #[arg(long)]
        epsilon: Option<f64>,
        /// gamma_k = sigma_{k+1} / sigma_k.
        #[arg(long, conflicts_with = "matrix")]
        gamma: Option<f64>,
        /// Preset matrix to take n and gamma_k from.
        #[arg(long)]
        matrix: Option<String>,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate { common, seed } => {
            let mut config = common.load()?;
            if let Some(seed) = seed {
                config.matrices.iter_mut().for_each(|m| m.seed = seed);
            }
            let dir = config.output_dir.join("matrices");
            for name in dump_matrices(&config.matrices, &dir)? {
                println!("{}", dir.join(name).display());
            }
        }
        Command::Run { common, jobs, seed, experiments, dump_matrices } => {
            let mut config = common.load()?;
            if let Some(seed) = seed {
                config.seeds = vec![seed];
            }
            if let Some(list) = experiments {
                config.experiments = parse_experiments(&list)?;
            }
            let manifest = run(&config, &RunOptions { jobs, dump_matrices, cache_dir: None })?;
            println!(
                "{} runs, {} completed, {} skipped, {} with bound violations -> {}",
                manifest.runs_total,
                manifest.runs_completed,
                manifest.skipped.len(),
                manifest.master_violations,
                config.output_dir.display()
            );
            for s in &manifest.skipped {
                println!("skipped {}: {}", s.key.file_stem(), s.reason);
            }
        }
        Command::Check { path } => {
            let csv = if path.is_dir() { path.join("results.csv") } else { path };
            let summary = check_csv(&csv)?;
            println!(
                "{} rows, {} deterministic bounds checked, {} violations",
                summary.rows,
                summary.checked,
                summary.violations.len()
            );
            for v in &summary.violations {
                println!(
                    "VIOLATION {} k={} rho={} q={} seed={} {} j={} norm={} measured={:e} bound={:e}",
                    v.matrix,
                    v.k,
                    v.rho,
                    v.q,
                    v.seed,
                    v.quantity,
                    v.j.map_or("-".into(), |j| j.to_string()),
                    v.norm_spec.map_or("-".into(), |s| s.to_string()),
                    v.measured,
                    v.bound
                );
            }
            if !summary.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Constants { mut n, k, rho, delta, epsilon, mut gamma, matrix } => {
            if let Some(name) = matrix {
                let spec = TestMatrixSpec::preset(&name, 0).with_context(|| format!("unknown matrix `{name}`"))?;
                let reference = ReferenceSvd::new(&spec.generate()?, k)?;
                n = reference.shape().1;
                gamma = Some(singular_ratios(&reference)?[k - 1]);
            }
            let c = gaussian_constants(n, k, rho, delta)?;
            println!("n = {n}, k = {k}, rho = {rho}, delta = {delta}");
            println!("C_e = {:.12}", c.c_e);
            println!("C_d = {:.12}", c.c_d);
            match (epsilon, gamma) {
                (Some(eps), Some(g)) => {
                    let q = required_iterations(eps, c.c_e, g).context("required iterations")?;
                    println!("gamma_k = {g:.12}");
                    println!("q = {q} (gamma_k^(2q+1) C_e = {:.6e} <= {eps})", g.powf((2 * q + 1) as f64) * c.c_e);
                }
                (Some(_), None) => bail!("--epsilon needs --gamma or --matrix"),
                _ => {}
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
