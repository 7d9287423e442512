//! Randomized subspace iteration and rank-k extraction.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{qr_nonnegative, singular_values_raw, svd_raw, DenseMatrix};

/// Identifies the random stream behind [`gaussian_guess`] and the test
/// matrix generators. Changing the generator or the sampling method must
/// change this string.
pub const PRNG_VERSION: &str = "chacha20(rand_chacha 0.9)/seed_from_u64/standard-normal-ziggurat(rand_distr 0.5)/v1";

/// How the sketch `(AAᵀ)^q AΩ` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Form the sketch explicitly, then orthonormalize once.
    Idealized,
    /// Re-orthonormalize after every multiplication by `A` or `Aᵀ`.
    #[default]
    Practical,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Idealized => "idealized",
            Variant::Practical => "practical",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "idealized" => Ok(Variant::Idealized),
            "practical" => Ok(Variant::Practical),
            _ => Err(Error::InvalidParameter(format!("unknown variant `{s}`"))),
        }
    }
}

/// Target rank `k`, oversampling `rho`, power count `q` and the seed of the
/// Gaussian starting guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchConfig {
    pub k: usize,
    pub rho: usize,
    pub q: usize,
    pub seed: u64,
    #[serde(default)]
    pub variant: Variant,
}

impl SketchConfig {
    pub fn new(k: usize, rho: usize, q: usize, seed: u64) -> Self {
        Self {
            k,
            rho,
            q,
            seed,
            variant: Variant::default(),
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    /// Number of sampled columns, `k + rho`.
    pub fn ell(&self) -> usize {
        self.k + self.rho
    }

    /// Checks `1 <= k` and `k + rho <= min(m, n)` for an `m x n` input.
    pub fn validate_for(&self, rows: usize, cols: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("target rank k must be >= 1".into()));
        }
        if self.ell() > rows.min(cols) {
            return Err(Error::InvalidParameter(format!(
                "k + rho = {} exceeds min(m, n) = {}",
                self.ell(),
                rows.min(cols)
            )));
        }
        Ok(())
    }

    /// The `n x (k + rho)` Gaussian starting guess for this configuration.
    pub fn starting_guess(&self, n: usize) -> Result<DenseMatrix> {
        gaussian_guess(n, self.ell(), self.seed)
    }
}

/// Approximate SVD `Û diag(σ̂) V̂ᵀ = Q Qᵀ A`.
#[derive(Debug, Clone)]
pub struct ApproxSvd {
    /// `m x ℓ`, orthonormal columns.
    pub u_hat: DenseMatrix,
    /// `ℓ` values, descending.
    pub sigma_hat: Vec<f64>,
    /// `n x ℓ`, orthonormal columns.
    pub v_hat: DenseMatrix,
    /// `m x ℓ` orthonormal basis of the sketch.
    pub q: DenseMatrix,
}

impl ApproxSvd {
    pub fn ell(&self) -> usize {
        self.sigma_hat.len()
    }

    /// Leading `k` triplets: the same factors [`truncate`] computes.
    pub fn truncated(&self, k: usize) -> Result<TruncatedApprox> {
        if k == 0 || k > self.ell() {
            return Err(Error::RankOutOfRange { k, max: self.ell() });
        }
        Ok(TruncatedApprox {
            u_hat_k: DenseMatrix::from_trusted(self.u_hat.columns(0, k).into_owned()),
            sigma_hat_k: self.sigma_hat[..k].to_vec(),
            v_hat_k: DenseMatrix::from_trusted(self.v_hat.columns(0, k).into_owned()),
        })
    }

    /// `Û diag(σ̂) V̂ᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u_hat.as_matrix().clone();
        for (j, s) in self.sigma_hat.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        DenseMatrix::from_trusted(us * self.v_hat.transpose().as_matrix())
    }
}

/// Rank-k factors extracted from `Q Qᵀ A`.
#[derive(Debug, Clone)]
pub struct TruncatedApprox {
    pub u_hat_k: DenseMatrix,
    pub sigma_hat_k: Vec<f64>,
    pub v_hat_k: DenseMatrix,
}

impl TruncatedApprox {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u_hat_k.as_matrix().clone();
        for (j, s) in self.sigma_hat_k.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        DenseMatrix::from_trusted(us * self.v_hat_k.transpose().as_matrix())
    }
}

/// `n x ell` matrix of i.i.d. standard normals, filled column by column from
/// a ChaCha20 stream seeded with `seed`. See [`PRNG_VERSION`].
pub fn gaussian_guess(n: usize, ell: usize, seed: u64) -> Result<DenseMatrix> {
    if ell == 0 || ell > n {
        return Err(Error::InvalidParameter(format!(
            "gaussian guess needs n >= ell >= 1, got n = {n}, ell = {ell}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let data: Vec<f64> = (0..n * ell).map(|_| StandardNormal.sample(&mut rng)).collect();
    DenseMatrix::from_column_slice(n, ell, &data)
}

/// Orthonormal basis `Q` for the range of `(AAᵀ)^q AΩ`.
///
/// Fails with [`Error::RankDeficientSketch`] when a diagonal entry of an
/// `R` factor drops below `ℓ ‖Y‖₂ ε`.
pub fn range_finder(
    a: &DenseMatrix,
    omega: &DenseMatrix,
    q: usize,
    variant: Variant,
) -> Result<DenseMatrix> {
    let (m, n) = a.shape();
    let ell = omega.ncols();
    if omega.nrows() != n {
        return Err(Error::ShapeMismatch {
            context: "range_finder",
            detail: format!("Omega has {} rows, A has {n} columns", omega.nrows()),
        });
    }
    if ell > m.min(n) {
        return Err(Error::InvalidParameter(format!(
            "ell = {ell} exceeds min(m, n) = {}",
            m.min(n)
        )));
    }
    let a = a.as_matrix();
    let basis = match variant {
        Variant::Idealized => {
            let mut y = a * omega.as_matrix();
            for _ in 0..q {
                let z = a.transpose() * &y;
                y = a * z;
            }
            orthonormalize(y)?
        }
        Variant::Practical => {
            let mut basis = orthonormalize(a * omega.as_matrix())?;
            for _ in 0..q {
                let z = orthonormalize(a.tr_mul(&basis))?;
                basis = orthonormalize(a * z)?;
            }
            basis
        }
    };
    Ok(DenseMatrix::from_trusted(basis))
}

fn orthonormalize(y: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let ell = y.ncols();
    if y.iter().any(|x| !x.is_finite()) {
        return Err(Error::RankDeficientSketch {
            numerical_rank: 0,
            expected: ell,
        });
    }
    let (q, r) = qr_nonnegative(y);
    let s = singular_values_raw(&r)?;
    let norm = s.first().copied().unwrap_or(0.0);
    let threshold = ell as f64 * norm * f64::EPSILON;
    let diag: Vec<f64> = (0..ell).map(|i| r[(i, i)].abs()).collect();
    if norm == 0.0 || diag.iter().any(|d| *d <= threshold) {
        let numerical_rank = s.iter().filter(|x| **x > threshold).count();
        return Err(Error::RankDeficientSketch {
            numerical_rank,
            expected: ell,
        });
    }
    Ok(q)
}

/// Randomized SVD: range finder, then the SVD of `B = QᵀA`.
pub fn rand_svd(
    a: &DenseMatrix,
    omega: &DenseMatrix,
    q: usize,
    variant: Variant,
) -> Result<ApproxSvd> {
    let basis = range_finder(a, omega, q, variant)?;
    let b = basis.as_matrix().tr_mul(a.as_matrix());
    let (u_b, sigma_hat, v_hat) = svd_raw(&b)?;
    let u_hat = basis.as_matrix() * u_b;
    Ok(ApproxSvd {
        u_hat: DenseMatrix::from_trusted(u_hat),
        sigma_hat,
        v_hat: DenseMatrix::from_trusted(v_hat),
        q: basis,
    })
}

/// Best rank-`k` approximation of `Q Qᵀ A` in factored form.
pub fn truncate(a: &DenseMatrix, q: &DenseMatrix, k: usize) -> Result<TruncatedApprox> {
    let ell = q.ncols();
    if k == 0 || k > ell {
        return Err(Error::RankOutOfRange { k, max: ell });
    }
    if q.nrows() != a.nrows() {
        return Err(Error::ShapeMismatch {
            context: "truncate",
            detail: format!("Q has {} rows, A has {}", q.nrows(), a.nrows()),
        });
    }
    let b = q.as_matrix().tr_mul(a.as_matrix());
    let (u_b, s, v) = svd_raw(&b)?;
    let u_hat_k = q.as_matrix() * u_b.columns(0, k);
    Ok(TruncatedApprox {
        u_hat_k: DenseMatrix::from_trusted(u_hat_k),
        sigma_hat_k: s[..k].to_vec(),
        v_hat_k: DenseMatrix::from_trusted(v.columns(0, k).into_owned()),
    })
}
