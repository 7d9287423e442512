//! Seeded generators for the three test-matrix families: controlled gap,
//! low-rank plus noise, and low-rank plus decay.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{qr_nonnegative, DenseMatrix};

/// Columns of the controlled-gap matrices; they have ten times as many rows.
pub const DEFAULT_N: usize = 300;
/// Inner rank: the index after which the spectrum changes character.
pub const DEFAULT_R: usize = 15;
/// Density of the sparse random vectors in the controlled-gap family.
pub const SPRAND_DENSITY: f64 = 0.025;
const ROWS_PER_COLUMN: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `Σ_j c_j x_j y_jᵀ` with sparse nonnegative `x_j, y_j` and
    /// `c_j = gap/j` for `j <= r`, `1/j` beyond.
    ControlledGap { gap: f64 },
    /// `[I_r 0; 0 0] + sqrt(γ_n r / (2n²)) (G + Gᵀ)`.
    LowRankPlusNoise { gamma_n: f64 },
    /// `U diag(1 (r times), 2^-d, 3^-d, ...) Vᵀ` with Haar-like `U, V`.
    LowRankPlusDecay { d: f64 },
}

impl Family {
    fn parameter(&self) -> f64 {
        match *self {
            Family::ControlledGap { gap } => gap,
            Family::LowRankPlusNoise { gamma_n } => gamma_n,
            Family::LowRankPlusDecay { d } => d,
        }
    }

    fn preset_name(&self) -> Option<&'static str> {
        let name = match *self {
            Family::ControlledGap { gap } if gap == 1.0 => "GapSmall",
            Family::ControlledGap { gap } if gap == 2.0 => "GapMedium",
            Family::ControlledGap { gap } if gap == 10.0 => "GapLarge",
            Family::LowRankPlusNoise { gamma_n } if gamma_n == 1e-2 => "NoiseSmall",
            Family::LowRankPlusNoise { gamma_n } if gamma_n == 1e-1 => "NoiseMedium",
            Family::LowRankPlusNoise { gamma_n } if gamma_n == 1.0 => "NoiseLarge",
            Family::LowRankPlusDecay { d } if d == 0.5 => "DecaySlow",
            Family::LowRankPlusDecay { d } if d == 1.0 => "DecayMedium",
            Family::LowRankPlusDecay { d } if d == 2.0 => "DecayFast",
            _ => return None,
        };
        Some(name)
    }
}

fn default_n() -> usize {
    DEFAULT_N
}

fn default_r() -> usize {
    DEFAULT_R
}

/// One reproducible test matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestMatrixSpec {
    #[serde(flatten)]
    pub family: Family,
    /// Column count. Controlled-gap matrices are `10n x n`, the others `n x n`.
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_r")]
    pub r: usize,
    #[serde(default)]
    pub seed: u64,
}

impl TestMatrixSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self {
            family,
            n: DEFAULT_N,
            r: DEFAULT_R,
            seed,
        }
    }

    pub fn with_size(mut self, n: usize, r: usize) -> Self {
        self.n = n;
        self.r = r;
        self
    }

    /// Looks up one of the nine named presets (`GapSmall` ... `DecayFast`).
    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        let family = match name {
            "GapSmall" => Family::ControlledGap { gap: 1.0 },
            "GapMedium" => Family::ControlledGap { gap: 2.0 },
            "GapLarge" => Family::ControlledGap { gap: 10.0 },
            "NoiseSmall" => Family::LowRankPlusNoise { gamma_n: 1e-2 },
            "NoiseMedium" => Family::LowRankPlusNoise { gamma_n: 1e-1 },
            "NoiseLarge" => Family::LowRankPlusNoise { gamma_n: 1.0 },
            "DecaySlow" => Family::LowRankPlusDecay { d: 0.5 },
            "DecayMedium" => Family::LowRankPlusDecay { d: 1.0 },
            "DecayFast" => Family::LowRankPlusDecay { d: 2.0 },
            _ => return None,
        };
        Some(Self::new(family, seed))
    }

    /// All nine presets, in gap, noise, decay order.
    pub fn suite(seed: u64) -> Vec<Self> {
        PRESET_NAMES
            .iter()
            .map(|name| Self::preset(name, seed).expect("known preset"))
            .collect()
    }

    /// Preset name such as `GapLarge`, with the size appended when it is not
    /// the default; otherwise a description of the parameters.
    pub fn label(&self) -> String {
        let base = match self.family.preset_name() {
            Some(name) => name.to_string(),
            None => match self.family {
                Family::ControlledGap { gap } => format!("controlled_gap(gap={gap})"),
                Family::LowRankPlusNoise { gamma_n } => {
                    format!("low_rank_plus_noise(gamma_n={gamma_n})")
                }
                Family::LowRankPlusDecay { d } => format!("low_rank_plus_decay(d={d})"),
            },
        };
        if self.n == DEFAULT_N && self.r == DEFAULT_R {
            base
        } else {
            format!("{base}[n={},r={}]", self.n, self.r)
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self.family {
            Family::ControlledGap { .. } => (ROWS_PER_COLUMN * self.n, self.n),
            _ => (self.n, self.n),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > self.n {
            return Err(Error::InvalidParameter(format!(
                "inner rank r = {} must be in 1..={}",
                self.r, self.n
            )));
        }
        let p = self.family.parameter();
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "family parameter must be positive, got {p}"
            )));
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<DenseMatrix> {
        self.validate()?;
        match self.family {
            Family::ControlledGap { gap } => {
                controlled_gap_sized(ROWS_PER_COLUMN * self.n, self.n, self.r, gap, self.seed)
            }
            Family::LowRankPlusNoise { gamma_n } => {
                low_rank_plus_noise(self.n, self.r, gamma_n, self.seed)
            }
            Family::LowRankPlusDecay { d } => low_rank_plus_decay(self.n, self.r, d, self.seed),
        }
    }
}

pub const PRESET_NAMES: [&str; 9] = [
    "GapSmall",
    "GapMedium",
    "GapLarge",
    "NoiseSmall",
    "NoiseMedium",
    "NoiseLarge",
    "DecaySlow",
    "DecayMedium",
    "DecayFast",
];

/// Sparse nonnegative vector: `ceil(density * len)` distinct positions
/// drawn uniformly, values uniform on `[0, 1)`.
fn sprand(rng: &mut ChaCha20Rng, len: usize, density: f64) -> Vec<(usize, f64)> {
    let count = ((density * len as f64).ceil() as usize).min(len);
    let positions = sample(rng, len, count);
    positions
        .into_iter()
        .map(|i| (i, rng.random::<f64>()))
        .collect()
}

/// The `3000 x 300` controlled-gap matrix with `r = 15`.
pub fn controlled_gap(gap: f64, seed: u64) -> Result<DenseMatrix> {
    TestMatrixSpec::new(Family::ControlledGap { gap }, seed).generate()
}

fn controlled_gap_sized(rows: usize, cols: usize, r: usize, gap: f64, seed: u64) -> Result<DenseMatrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    for j in 1..=cols {
        let coeff = if j <= r { gap / j as f64 } else { 1.0 / j as f64 };
        let x = sprand(&mut rng, rows, SPRAND_DENSITY);
        let y = sprand(&mut rng, cols, SPRAND_DENSITY);
        for &(yi, yv) in &y {
            for &(xi, xv) in &x {
                a[(xi, yi)] += coeff * xv * yv;
            }
        }
    }
    DenseMatrix::new(a)
}

fn gaussian_square(rng: &mut ChaCha20Rng, n: usize) -> DMatrix<f64> {
    let data: Vec<f64> = (0..n * n).map(|_| StandardNormal.sample(rng)).collect();
    DMatrix::from_column_slice(n, n, &data)
}

pub fn low_rank_plus_noise(n: usize, r: usize, gamma_n: f64, seed: u64) -> Result<DenseMatrix> {
    TestMatrixSpec {
        family: Family::LowRankPlusNoise { gamma_n },
        n,
        r,
        seed,
    }
    .validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = gaussian_square(&mut rng, n);
    let scale = (gamma_n * r as f64 / (2.0 * (n * n) as f64)).sqrt();
    let mut a = (&g + g.transpose()) * scale;
    for i in 0..r {
        a[(i, i)] += 1.0;
    }
    DenseMatrix::new(a)
}

/// `(1, ..., 1, 2^-d, 3^-d, ..., (n - r + 1)^-d)` with `r` leading ones.
pub fn decay_spectrum(n: usize, r: usize, d: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i < r {
                1.0
            } else {
                ((i - r + 2) as f64).powf(-d)
            }
        })
        .collect()
}

pub fn low_rank_plus_decay(n: usize, r: usize, d: f64, seed: u64) -> Result<DenseMatrix> {
    TestMatrixSpec {
        family: Family::LowRankPlusDecay { d },
        n,
        r,
        seed,
    }
    .validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (u, _) = qr_nonnegative(gaussian_square(&mut rng, n));
    let (v, _) = qr_nonnegative(gaussian_square(&mut rng, n));
    let mut us = u;
    for (j, s) in decay_spectrum(n, r, d).iter().enumerate() {
        us.column_mut(j).scale_mut(*s);
    }
    DenseMatrix::new(us * v.transpose())
}
