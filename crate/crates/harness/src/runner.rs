//! Sweep execution: one reference SVD per matrix, then every
//! `(k, rho, q, seed)` run fanned out over the rayon pool.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use rayon::prelude::*;
use rsvd_diag::bounds::{evaluate, EvalOptions};
use rsvd_diag::mtx::{write_path, MmFormat};
use rsvd_diag::sketch::PRNG_VERSION;
use rsvd_diag::{BoundReport, DenseMatrix, ReferenceSvd, SketchConfig, SvdFactors, TestMatrixSpec};
use serde::{Deserialize, Serialize};

use crate::cache::{file_stem, sha256_hex, SvdCache};
use crate::config::ExperimentConfig;
use crate::output::{write_csv, CsvRow};
use crate::plot::write_plots;

/// Position of one run in the sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunKey {
    pub matrix: String,
    pub k: usize,
    pub rho: usize,
    pub q: usize,
    pub seed: u64,
}

impl RunKey {
    pub fn file_stem(&self) -> String {
        format!(
            "{}_k{}_rho{}_q{}_seed{}",
            file_stem(&self.matrix),
            self.k,
            self.rho,
            self.q,
            self.seed
        )
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub key: RunKey,
    /// The report, or why the run was skipped.
    pub result: std::result::Result<BoundReport, String>,
}

impl RunOutcome {
    pub fn report(&self) -> Option<&BoundReport> {
        self.result.as_ref().ok()
    }
}

struct Prepared {
    label: String,
    matrix: std::result::Result<(Arc<DenseMatrix>, Arc<SvdFactors>), String>,
}

fn prepare(spec: &TestMatrixSpec, cache: Option<&SvdCache>) -> Prepared {
    let matrix = (|| -> Result<_> {
        let a = spec.generate()?;
        let factors = match cache {
            Some(c) => c.get_or_compute(spec, &a)?,
            None => rsvd_diag::bounds::reference_factors(&a)?,
        };
        Ok((Arc::new(a), Arc::new(factors)))
    })()
    .map_err(|e| format!("{e:#}"));
    Prepared {
        label: spec.label(),
        matrix,
    }
}

/// Evaluates every run of `config` in sweep order (matrix, k, rho, q,
/// seed). Runs that violate an assumption come back as `Err(reason)`.
/// Uses the current rayon pool.
pub fn sweep(config: &ExperimentConfig, cache: Option<&SvdCache>) -> Vec<RunOutcome> {
    // Reference SVDs (and cache writes) finish before the runs fan out.
    let prepared: Vec<Prepared> = config.matrices.par_iter().map(|s| prepare(s, cache)).collect();

    let mut jobs = Vec::with_capacity(config.len());
    for p in &prepared {
        for &k in &config.k {
            for &rho in &config.rho {
                for &q in &config.q {
                    for &seed in &config.seeds {
                        jobs.push((p, RunKey { matrix: p.label.clone(), k, rho, q, seed }));
                    }
                }
            }
        }
    }

    let options = EvalOptions {
        norm_specs: config.norm_specs.clone(),
        delta: Some(config.delta),
    };
    jobs.into_par_iter()
        .map(|(p, key)| {
            let result = match &p.matrix {
                Ok((a, factors)) => run_one(a, factors, &key, &options, config).map_err(|e| e.to_string()),
                Err(reason) => Err(reason.clone()),
            };
            RunOutcome { key, result }
        })
        .collect()
}

fn run_one(
    a: &DenseMatrix,
    factors: &Arc<SvdFactors>,
    key: &RunKey,
    options: &EvalOptions,
    config: &ExperimentConfig,
) -> rsvd_diag::Result<BoundReport> {
    let reference = ReferenceSvd::from_factors(Arc::clone(factors), key.k)?;
    let sketch = SketchConfig::new(key.k, key.rho, key.q, key.seed);
    let mut report = evaluate(a, &reference, &sketch, options)?;
    report.entries.retain(|e| config.wants(e.quantity));
    report.skipped.retain(|s| config.wants(s.quantity));
    Ok(report)
}

/// Skipped run as recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRun {
    #[serde(flatten)]
    pub key: RunKey,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub config: ExperimentConfig,
    pub prng_version: String,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: String,
    pub runs_total: usize,
    pub runs_completed: usize,
    pub skipped: Vec<SkippedRun>,
    /// Runs with at least one deterministic bound violated.
    pub master_violations: usize,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
    pub dump_matrices: bool,
    /// Overrides `RSVD_DIAG_CACHE` and the default cache location.
    pub cache_dir: Option<PathBuf>,
}

/// Runs the sweep and writes `manifest.json`, `results.csv`,
/// `reports/*.json` and `plots/*.svg` under `config.output_dir`. With an
/// empty experiment list only the manifest is written.
pub fn run(config: &ExperimentConfig, options: &RunOptions) -> Result<Manifest> {
    config.validate()?;
    let started_at = chrono::Utc::now().to_rfc3339();
    let out = &config.output_dir;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let config_json = config.to_json();

    let mut files = Vec::new();
    let mut outcomes = Vec::new();
    if !config.experiments.is_empty() {
        let cache = match &options.cache_dir {
            Some(dir) => SvdCache::new(dir),
            None => SvdCache::from_env(out),
        };
        outcomes = with_pool(options.jobs, || sweep(config, Some(&cache)))?;

        let reports_dir = out.join("reports");
        fs::create_dir_all(&reports_dir)?;
        outcomes
            .par_iter()
            .filter_map(|o| o.report().map(|r| (o, r)))
            .try_for_each(|(o, r)| -> Result<()> {
                let path = reports_dir.join(format!("{}.json", o.key.file_stem()));
                fs::write(&path, serde_json::to_string_pretty(r)?)
                    .with_context(|| format!("writing {}", path.display()))
            })?;
        files.extend(
            outcomes
                .iter()
                .filter(|o| o.report().is_some())
                .map(|o| format!("reports/{}.json", o.key.file_stem())),
        );

        let rows = CsvRow::from_outcomes(&outcomes);
        write_csv(&out.join("results.csv"), &rows)?;
        files.push("results.csv".into());
        files.extend(write_plots(&out.join("plots"), config, &outcomes)?.into_iter().map(|p| format!("plots/{p}")));
    }
    if options.dump_matrices {
        files.extend(dump_matrices(&config.matrices, &out.join("matrices"))?.into_iter().map(|p| format!("matrices/{p}")));
    }

    let skipped = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().err().map(|r| SkippedRun { key: o.key.clone(), reason: r.clone() }))
        .collect::<Vec<_>>();
    let manifest = Manifest {
        config_sha256: sha256_hex(config_json.as_bytes()),
        config: config.clone(),
        prng_version: PRNG_VERSION.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        runs_total: if config.experiments.is_empty() { 0 } else { config.len() },
        runs_completed: outcomes.len() - skipped.len(),
        master_violations: outcomes.iter().filter_map(RunOutcome::report).filter(|r| !r.master_holds()).count(),
        skipped,
        files,
    };
    fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// Runs `f` on a pool with `jobs` threads, or on the global pool.
pub fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?.install(f)),
        None => Ok(f()),
    }
}

/// Writes each matrix to `<dir>/<label>.mtx` (array format); returns the
/// file names.
pub fn dump_matrices(specs: &[TestMatrixSpec], dir: &Path) -> Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    specs
        .par_iter()
        .map(|spec| {
            let name = format!("{}_seed{}.mtx", file_stem(&spec.label()), spec.seed);
            write_path(&dir.join(&name), &spec.generate()?, MmFormat::Array)?;
            Ok(name)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;
    use crate::output::{check_csv, read_csv};

    fn small_config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            matrices: vec![
                TestMatrixSpec::preset("GapLarge", 0).unwrap().with_size(30, 4),
                TestMatrixSpec::preset("DecayFast", 0).unwrap().with_size(30, 4),
            ],
            k: vec![4],
            rho: vec![3],
            q: vec![0, 1],
            seeds: vec![0, 1],
            output_dir: dir.to_path_buf(),
            ..ExperimentConfig::default()
        }
    }

    fn options(dir: &Path) -> RunOptions {
        RunOptions { jobs: Some(2), dump_matrices: true, cache_dir: Some(dir.join("cache")) }
    }

    #[test]
    fn run_writes_every_artifact() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let manifest = run(&config, &options(dir.path())).unwrap();
        assert_eq!(manifest.runs_total, 8);
        assert_eq!(manifest.runs_completed, 8);
        assert_eq!(manifest.master_violations, 0);
        assert_eq!(manifest.prng_version, PRNG_VERSION);
        for f in &manifest.files {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert_eq!(manifest.files.iter().filter(|f| f.starts_with("plots/")).count(), 2 * 5);
        assert_eq!(manifest.files.iter().filter(|f| f.starts_with("reports/")).count(), 8);
        assert_eq!(manifest.files.iter().filter(|f| f.starts_with("matrices/")).count(), 2);
        assert!(check_csv(&dir.path().join("results.csv")).unwrap().passed());
        let rows = read_csv(&dir.path().join("results.csv")).unwrap();
        assert!(rows.iter().any(|r| r.quantity == rsvd_diag::bounds::Quantity::ProbTailTheta));
    }

    #[test]
    fn empty_experiment_list_writes_only_the_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = small_config(dir.path());
        config.experiments.clear();
        let manifest = run(&config, &RunOptions::default()).unwrap();
        assert_eq!(manifest.runs_total, 0);
        assert!(manifest.files.is_empty());
        let mut entries: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
        entries.sort();
        assert_eq!(entries, vec![std::ffi::OsString::from("manifest.json")]);
    }

    #[test]
    fn experiments_filter_the_rows() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = small_config(dir.path());
        config.experiments = vec![Experiment::SingularValues];
        run(&config, &options(dir.path())).unwrap();
        let rows = read_csv(&dir.path().join("results.csv")).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| Experiment::of(r.quantity) == Experiment::SingularValues));
    }

    #[test]
    fn assumption_violations_are_skipped_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = small_config(dir.path());
        // sigma_3 = sigma_4 = 1 for the decay matrix: no gap at k = 3.
        config.k = vec![3, 4];
        let manifest = run(&config, &options(dir.path())).unwrap();
        assert_eq!(manifest.runs_total, 16);
        assert_eq!(manifest.skipped.len(), 4);
        assert!(manifest.skipped.iter().all(|s| s.key.matrix.starts_with("DecayFast") && s.key.k == 3));
        assert!(manifest.skipped[0].reason.contains("gap"), "{}", manifest.skipped[0].reason);
        assert_eq!(manifest.runs_completed, 12);
    }

    #[test]
    fn sweep_order_and_cache_do_not_change_results() {
        let dir = tempfile::tempdir().unwrap();
        let config = small_config(dir.path());
        let cache = SvdCache::new(dir.path().join("cache"));
        let cold = with_pool(Some(1), || sweep(&config, Some(&cache))).unwrap();
        let warm = with_pool(Some(3), || sweep(&config, Some(&cache))).unwrap();
        let bare = sweep(&config, None);
        let keys: Vec<_> = cold.iter().map(|o| o.key.file_stem()).collect();
        assert_eq!(keys[0], "GapLarge_n_30_r_4_k4_rho3_q0_seed0");
        for ((a, b), c) in cold.iter().zip(&warm).zip(&bare) {
            assert_eq!(a.key, b.key);
            assert_eq!(a.report(), b.report());
            assert_eq!(a.report(), c.report());
        }
    }
}
