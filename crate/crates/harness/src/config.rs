//! Sweep definitions read from JSON.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rsvd_diag::bounds::Quantity;
use rsvd_diag::{NormSpec, TestMatrixSpec};
use serde::{Deserialize, Serialize};

/// A group of bound entries that is written and plotted together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    AnglesNoExtraction,
    AnglesExtraction,
    SingularValues,
    LowrankErrors,
    ProbabilisticCalibration,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::AnglesNoExtraction,
        Experiment::AnglesExtraction,
        Experiment::SingularValues,
        Experiment::LowrankErrors,
        Experiment::ProbabilisticCalibration,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::AnglesNoExtraction => "angles_no_extraction",
            Experiment::AnglesExtraction => "angles_extraction",
            Experiment::SingularValues => "singular_values",
            Experiment::LowrankErrors => "lowrank_errors",
            Experiment::ProbabilisticCalibration => "probabilistic_calibration",
        }
    }

    /// The report quantities that belong to this experiment.
    pub fn quantities(&self) -> &'static [Quantity] {
        use Quantity::*;
        match self {
            Experiment::AnglesNoExtraction => &[SinTheta, SinNu, TanTheta, TanNu, SinThetaNorm, SinNuNorm],
            Experiment::AnglesExtraction => &[
                TruncationTheta,
                TruncationNu,
                GenSinTheta,
                GenSinThetaWedin,
                ExtractionNorm,
                ExtractionAngle,
                VectorSubspaceU,
                VectorSubspaceV,
                VectorTriplet,
            ],
            Experiment::SingularValues => &[SigmaUpper, SigmaLower, HoffmanWielandt, HoffmanWielandtSchatten],
            Experiment::LowrankErrors => &[
                LowrankResidual,
                LowrankResidualRankK,
                LowrankTruncated,
                LowrankResidualSchatten,
                EckartYoungFloor,
            ],
            Experiment::ProbabilisticCalibration => {
                &[ProbExpectationTheta, ProbExpectationNu, ProbTailTheta, ProbTailNu]
            }
        }
    }

    pub fn of(quantity: Quantity) -> Experiment {
        Experiment::ALL
            .into_iter()
            .find(|e| e.quantities().contains(&quantity))
            .expect("every quantity belongs to an experiment")
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .with_context(|| format!("unknown experiment `{s}`"))
    }
}

/// Parses a comma-separated experiment list; the empty string is the empty
/// list.
pub fn parse_experiments(s: &str) -> Result<Vec<Experiment>> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect()
}

fn default_k() -> Vec<usize> {
    vec![25]
}

fn default_rho() -> Vec<usize> {
    vec![20]
}

fn default_q() -> Vec<usize> {
    vec![0, 1, 2]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_norm_specs() -> Vec<NormSpec> {
    vec![NormSpec::Spectral, NormSpec::FROBENIUS]
}

fn default_delta() -> f64 {
    0.1
}

fn default_experiments() -> Vec<Experiment> {
    Experiment::ALL.to_vec()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// One sweep: every matrix crossed with every `(k, rho, q, seed)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub matrices: Vec<TestMatrixSpec>,
    #[serde(default = "default_k")]
    pub k: Vec<usize>,
    #[serde(default = "default_rho")]
    pub rho: Vec<usize>,
    #[serde(default = "default_q")]
    pub q: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_norm_specs")]
    pub norm_specs: Vec<NormSpec>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_experiments")]
    pub experiments: Vec<Experiment>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    /// The nine preset matrices, `k = 25`, `rho = 20`, `q = 0, 1, 2`, seed 0.
    fn default() -> Self {
        Self {
            matrices: TestMatrixSpec::suite(0),
            k: default_k(),
            rho: default_rho(),
            q: default_q(),
            seeds: default_seeds(),
            norm_specs: default_norm_specs(),
            delta: default_delta(),
            experiments: default_experiments(),
            output_dir: default_output_dir(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: Self =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrices.is_empty() {
            bail!("config lists no matrices");
        }
        for (name, len) in [
            ("k", self.k.len()),
            ("rho", self.rho.len()),
            ("q", self.q.len()),
            ("seeds", self.seeds.len()),
            ("norm_specs", self.norm_specs.len()),
        ] {
            if len == 0 {
                bail!("grid `{name}` is empty");
            }
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            bail!("delta must lie in (0, 1), got {}", self.delta);
        }
        for spec in &self.matrices {
            spec.validate().with_context(|| format!("matrix {}", spec.label()))?;
        }
        Ok(())
    }

    /// Number of runs in the sweep.
    pub fn len(&self) -> usize {
        self.matrices.len() * self.k.len() * self.rho.len() * self.q.len() * self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn wants(&self, quantity: Quantity) -> bool {
        self.experiments.contains(&Experiment::of(quantity))
    }

    /// Pretty JSON, the form that is hashed into the manifest.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
