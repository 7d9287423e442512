//! Structural and probabilistic accuracy bounds for randomized subspace
//! iteration, evaluated from an exact reference SVD of `A`.
//!
//! Notation: `A = U Σ Vᵀ` with `σ_1 >= σ_2 >= ...`; the split index `k`
//! partitions `U = [U_k U_⊥]`, `Σ = diag(Σ_k, Σ_⊥)`, `V = [V_k V_⊥]`.
//! The starting guess enters through `Ω₁ = V_kᵀΩ`, `Ω₂ = V_⊥ᵀΩ` and the
//! leverage `ω = ‖Ω₂Ω₁†‖₂`. The singular value ratios are
//! `γ_j = σ_{k+1} / σ_j` for `j = 1..k`.
//!
//! Every evaluator here is a closed-form function of those quantities. The
//! measured counterparts and the pairing between the two live in
//! [`report`].

mod gaussian;
pub mod report;

pub use gaussian::{
    gaussian_constants, probabilistic_angle_bounds, required_iterations, GaussianConstants,
    ProbAngleBound,
};
pub use report::{
    evaluate, evaluate_with_guess, BoundEntry, BoundReport, Direction, EvalOptions, Quantity,
    SkippedBound, MASTER_SLACK,
};

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, pinv_raw, singular_values_raw, svd, DenseMatrix, SvdFactors, SvdMode};
use crate::norms::{gauge_padded, NormSpec};

/// Exact SVD of `A` split at index `k`.
///
/// Cheap to clone: the factors sit behind an [`Arc`] so one decomposition
/// serves every `k`, `q` and seed of a sweep.
#[derive(Debug, Clone)]
pub struct ReferenceSvd {
    factors: Arc<SvdFactors>,
    k: usize,
}

/// SVD of `A` with `U` of size `m x r` and `V` completed to `n x n`, so
/// that `V_⊥` spans the whole orthogonal complement of `V_k`.
///
/// Singular values at or below `max(m, n) ε σ₁` are set to zero, which
/// makes matrices of exact rank `k` report `γ_j = 0`.
pub fn reference_factors(a: &DenseMatrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    let mut factors = svd(a, SvdMode::Thin)?;
    let s1 = factors.singular_values.first().copied().unwrap_or(0.0);
    let floor = m.max(n) as f64 * f64::EPSILON * s1;
    for s in factors.singular_values.iter_mut() {
        if *s <= floor {
            *s = 0.0;
        }
    }
    if n > m {
        let v = factors.v.as_matrix();
        let complement = orthogonal_complement(v);
        let mut full = DMatrix::zeros(n, n);
        full.columns_mut(0, m).copy_from(v);
        full.columns_mut(m, n - m).copy_from(&complement);
        factors.v = DenseMatrix::from_trusted(full);
    }
    Ok(factors)
}

impl ReferenceSvd {
    /// Computes the reference factors of `a` and splits them at `k`.
    pub fn new(a: &DenseMatrix, k: usize) -> Result<Self> {
        Self::from_factors(Arc::new(reference_factors(a)?), k)
    }

    /// Reuses factors from [`reference_factors`].
    pub fn from_factors(factors: Arc<SvdFactors>, k: usize) -> Result<Self> {
        let r = factors.len();
        if k == 0 || k > r {
            return Err(Error::RankOutOfRange { k, max: r });
        }
        if factors.v.ncols() != factors.v.nrows() {
            return Err(Error::ShapeMismatch {
                context: "ReferenceSvd",
                detail: format!(
                    "V must be square, got {}x{}",
                    factors.v.nrows(),
                    factors.v.ncols()
                ),
            });
        }
        Ok(Self { factors, k })
    }

    /// The same factors split at another index.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::from_factors(Arc::clone(&self.factors), k)
    }

    pub fn factors(&self) -> &Arc<SvdFactors> {
        &self.factors
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `(m, n)` of the decomposed matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.factors.u.nrows(), self.factors.v.nrows())
    }

    /// All singular values, descending.
    pub fn sigma(&self) -> &[f64] {
        &self.factors.singular_values
    }

    pub fn sigma_k(&self) -> f64 {
        self.sigma()[self.k - 1]
    }

    /// `σ_{k+1}`, zero when `k = min(m, n)`.
    pub fn sigma_next(&self) -> f64 {
        self.sigma().get(self.k).copied().unwrap_or(0.0)
    }

    /// Diagonal of `Σ_⊥`.
    pub fn sigma_perp(&self) -> &[f64] {
        &self.sigma()[self.k..]
    }

    pub fn u_k(&self) -> DenseMatrix {
        DenseMatrix::from_trusted(self.factors.u.columns(0, self.k).into_owned())
    }

    pub fn v_k(&self) -> DenseMatrix {
        DenseMatrix::from_trusted(self.factors.v.columns(0, self.k).into_owned())
    }

    /// `n x (n - k)`; has no columns when `k = n`.
    pub fn v_perp(&self) -> DMatrix<f64> {
        let n = self.factors.v.ncols();
        self.factors.v.columns(self.k, n - self.k).into_owned()
    }

    /// `A_k = U_k Σ_k V_kᵀ`.
    pub fn a_k(&self) -> DenseMatrix {
        let mut us = self.factors.u.columns(0, self.k).into_owned();
        for j in 0..self.k {
            us.column_mut(j).scale_mut(self.sigma()[j]);
        }
        DenseMatrix::from_trusted(us * self.factors.v.columns(0, self.k).transpose())
    }

    fn gauge_perp(&self, spec: NormSpec) -> f64 {
        gauge_padded(self.sigma_perp(), spec)
    }
}

/// The starting guess seen through the right singular vectors of `A`.
#[derive(Debug, Clone)]
pub struct OmegaSplit {
    omega1: DMatrix<f64>,
    omega2: DMatrix<f64>,
    leverage: f64,
    sigma_min_omega1: f64,
    weighted: Vec<f64>,
}

impl OmegaSplit {
    /// `Ω₁ = V_kᵀΩ`, `k x ℓ`.
    pub fn omega1(&self) -> &DMatrix<f64> {
        &self.omega1
    }

    /// `Ω₂ = V_⊥ᵀΩ`, `(n - k) x ℓ`.
    pub fn omega2(&self) -> &DMatrix<f64> {
        &self.omega2
    }

    /// `ω = ‖Ω₂Ω₁†‖₂`.
    pub fn leverage(&self) -> f64 {
        self.leverage
    }

    /// `σ_k(Ω₁)`.
    pub fn sigma_min_omega1(&self) -> f64 {
        self.sigma_min_omega1
    }

    /// Singular values of `Σ_⊥Ω₂Ω₁†`, descending.
    pub fn weighted_singular_values(&self) -> &[f64] {
        &self.weighted
    }

    /// `|||Σ_⊥Ω₂Ω₁†|||`.
    pub fn weighted_norm(&self, spec: NormSpec) -> f64 {
        gauge_padded(&self.weighted, spec)
    }
}

/// Splits the `n x ℓ` starting guess `omega` against `V_k` and `V_⊥`.
///
/// Fails with [`Error::Omega1RankDeficient`] unless
/// `σ_k(Ω₁) > k ‖Ω₁‖₂ ε`.
pub fn split_omega(reference: &ReferenceSvd, omega: &DenseMatrix) -> Result<OmegaSplit> {
    let (_, n) = reference.shape();
    let k = reference.k();
    if omega.nrows() != n {
        return Err(Error::ShapeMismatch {
            context: "split_omega",
            detail: format!("Omega has {} rows, A has {n} columns", omega.nrows()),
        });
    }
    let v = reference.factors.v.as_matrix();
    let omega1 = v.columns(0, k).tr_mul(omega.as_matrix());
    let omega2 = v.columns(k, n - k).tr_mul(omega.as_matrix());

    let s = singular_values_raw(&omega1)?;
    let norm = s.first().copied().unwrap_or(0.0);
    let sigma_min = if s.len() >= k { s[k - 1] } else { 0.0 };
    let threshold = k as f64 * norm * f64::EPSILON;
    if !(sigma_min > threshold) {
        return Err(Error::Omega1RankDeficient {
            k,
            sigma_min,
            threshold,
        });
    }

    let x = &omega2 * pinv_raw(&omega1, k as f64 * f64::EPSILON)?;
    let leverage = singular_values_raw(&x)?.first().copied().unwrap_or(0.0);

    // Σ_⊥ is (m - k) x (n - k) but only its first r - k rows are nonzero.
    let perp = reference.sigma_perp();
    let mut weighted_rows = x.rows(0, perp.len()).into_owned();
    for (i, s) in perp.iter().enumerate() {
        weighted_rows.row_mut(i).scale_mut(*s);
    }
    let weighted = singular_values_raw(&weighted_rows)?;

    Ok(OmegaSplit {
        omega1,
        omega2,
        leverage,
        sigma_min_omega1: sigma_min,
        weighted,
    })
}

/// `γ_j = σ_{k+1} / σ_j` for `j = 1..k`, ascending.
pub fn singular_ratios(reference: &ReferenceSvd) -> Result<Vec<f64>> {
    let k = reference.k();
    if reference.sigma_k() == 0.0 {
        return Err(Error::ZeroSingularValue { index: k });
    }
    let next = reference.sigma_next();
    Ok(reference.sigma()[..k].iter().map(|s| next / s).collect())
}

/// `γ_k`, or [`Error::NoSpectralGap`] when `σ_k` and `σ_{k+1}` are tied.
/// Values closer than the reference tolerance `max(m, n) ε σ₁` count as
/// tied: the factors `1/(1 - γ_k)` would otherwise be of order `1/ε`.
fn require_gap(reference: &ReferenceSvd, gammas: &[f64]) -> Result<f64> {
    let gamma_k = gammas.last().copied().unwrap_or(0.0);
    let (m, n) = reference.shape();
    let tie = m.max(n) as f64 * f64::EPSILON * reference.sigma()[0];
    if !(gamma_k < 1.0) || reference.sigma_k() - reference.sigma_next() <= tie {
        return Err(Error::NoSpectralGap {
            k: gammas.len(),
            gamma_k,
        });
    }
    Ok(gamma_k)
}

fn pow(gamma: f64, e: usize) -> f64 {
    gamma.powf(e as f64)
}

/// `t / sqrt(1 + t²)`: the sine of an angle whose tangent is `t`.
fn sine_of_tangent(t: f64) -> f64 {
    if t.is_infinite() {
        return 1.0;
    }
    t / 1f64.hypot(t)
}

/// Per-angle bounds on `θ_j = ∠(U_k, Û)` and `ν_j = ∠(V_k, V̂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleBound {
    pub sin_theta: f64,
    pub sin_nu: f64,
    pub tan_theta: f64,
    pub tan_nu: f64,
}

/// `tan θ_j <= γ_j^{2q+1} ω`, `tan ν_j <= γ_j^{2q+2} ω`, and the matching
/// sine bounds.
pub fn angle_bounds(gammas: &[f64], q: usize, leverage: f64) -> Vec<AngleBound> {
    gammas
        .iter()
        .map(|&g| {
            let tan_theta = pow(g, 2 * q + 1) * leverage;
            let tan_nu = pow(g, 2 * q + 2) * leverage;
            AngleBound {
                sin_theta: sine_of_tangent(tan_theta),
                sin_nu: sine_of_tangent(tan_nu),
                tan_theta,
                tan_nu,
            }
        })
        .collect()
}

/// Norm-level bounds on `|||sin ∠(U_k, Û)|||` and `|||sin ∠(V_k, V̂)|||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideBounds {
    pub u_side: f64,
    pub v_side: f64,
}

/// `γ_k^{2q} |||Σ_⊥||| / σ_k · ω` and the same with `γ_k^{2q+1}`.
pub fn angle_norm_bounds(
    reference: &ReferenceSvd,
    q: usize,
    leverage: f64,
    spec: NormSpec,
) -> Result<SideBounds> {
    let gammas = singular_ratios(reference)?;
    let gamma_k = gammas[reference.k() - 1];
    let base = reference.gauge_perp(spec) / reference.sigma_k() * leverage;
    Ok(SideBounds {
        u_side: pow(gamma_k, 2 * q) * base,
        v_side: pow(gamma_k, 2 * q + 1) * base,
    })
}

/// One row of the generalized sin-theta check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSinThetaRow {
    /// `max{sin θ'_j, sin ν'_j}`.
    pub measured: f64,
    /// `σ_k / σ_j · max{sin θ'_k, sin ν'_k}`.
    pub bound: f64,
}

impl GenSinThetaRow {
    pub fn residual(&self) -> f64 {
        self.bound - self.measured
    }
}

/// `ζ = σ_k(A) - σ_{k+1}(Â)`, with `σ_{k+1}(Â) = 0` when `Â` has rank `k`.
pub fn sin_theta_gap(reference: &ReferenceSvd, sigma_hat: &[f64]) -> f64 {
    reference.sigma_k() - sigma_hat.get(reference.k()).copied().unwrap_or(0.0)
}

/// Compares each extracted angle pair with the largest one, scaled by
/// `σ_k / σ_j`. `theta_prime` and `nu_prime` hold the sines of
/// `∠(U_k, Û_k)` and `∠(V_k, V̂_k)` in ascending order.
pub fn gensintheta_check(
    reference: &ReferenceSvd,
    sigma_hat: &[f64],
    theta_prime: &[f64],
    nu_prime: &[f64],
) -> Result<Vec<GenSinThetaRow>> {
    let k = reference.k();
    if theta_prime.len() != k || nu_prime.len() != k {
        return Err(Error::ShapeMismatch {
            context: "gensintheta_check",
            detail: format!(
                "expected {k} angles, got {} and {}",
                theta_prime.len(),
                nu_prime.len()
            ),
        });
    }
    let zeta = sin_theta_gap(reference, sigma_hat);
    if !(zeta > 0.0) {
        return Err(Error::GapViolation { zeta });
    }
    let sigma_k = reference.sigma_k();
    let largest = theta_prime[k - 1].max(nu_prime[k - 1]);
    Ok((0..k)
        .map(|j| GenSinThetaRow {
            measured: theta_prime[j].max(nu_prime[j]),
            bound: sigma_k / reference.sigma()[j] * largest,
        })
        .collect())
}

/// Bounds on the angles of the extracted rank-`k` subspaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionBound {
    pub phi: f64,
    /// Bound on `max{|||sin ∠(U_k, Û_k)|||, |||sin ∠(V_k, V̂_k)|||}`.
    pub norm_bound: f64,
    /// Bound on `max{sin θ'_j, sin ν'_j}`. May exceed 1.
    pub per_j: Vec<f64>,
}

/// `φ γ_k^{2q} / (1 - γ_k) · |||Σ_⊥||| / σ_k · ω` and
/// `γ_j γ_k^{2q} / (1 - γ_k) · ω`. Requires `γ_k < 1`.
pub fn extraction_bounds(
    reference: &ReferenceSvd,
    q: usize,
    leverage: f64,
    spec: NormSpec,
) -> Result<ExtractionBound> {
    let gammas = singular_ratios(reference)?;
    let gamma_k = require_gap(reference, &gammas)?;
    let factor = pow(gamma_k, 2 * q) / (1.0 - gamma_k) * leverage;
    let phi = spec.phi();
    Ok(ExtractionBound {
        phi,
        norm_bound: phi * factor * reference.gauge_perp(spec) / reference.sigma_k(),
        per_j: gammas.iter().map(|g| g * factor).collect(),
    })
}

/// Bounds for single singular vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleVectorBound {
    /// Bound on `sin ∠(u_j, Û)`.
    pub subspace_u: f64,
    /// Bound on `sin ∠(v_j, V̂)`.
    pub subspace_v: f64,
    /// Bound on `max{sin ∠(u_j, û_j), sin ∠(v_j, v̂_j)}`; `None` when
    /// `δ̃_j = 0` and `γ_j > 0`, where the bound is undefined.
    pub triplet: Option<f64>,
    pub gamma_tilde: f64,
    pub delta_tilde: f64,
}

/// `δ̃_j = min{ min_{i != j} |σ_j - σ̂_i|, σ_j }` over the approximate
/// singular values `σ̂_1..σ̂_ℓ`.
pub fn delta_tilde(sigma_j: f64, j: usize, sigma_hat: &[f64]) -> f64 {
    sigma_hat
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, s)| (sigma_j - s).abs())
        .fold(sigma_j, f64::min)
}

/// `γ_j^{2q+1} ω`, `γ_j^{2q+2} ω` and
/// `sqrt(1 + 2γ̃²/δ̃_j²) γ_j^{2q+1} ω` with
/// `γ̃² = ‖Σ_⊥‖₂² + ‖Σ_⊥Ω₂Ω₁†‖₂²`. Indices `j` are zero-based here.
pub fn single_vector_bounds(
    reference: &ReferenceSvd,
    q: usize,
    split: &OmegaSplit,
    sigma_hat: &[f64],
) -> Result<Vec<SingleVectorBound>> {
    let gammas = singular_ratios(reference)?;
    let leverage = split.leverage();
    let gamma_tilde = reference
        .sigma_next()
        .hypot(split.weighted_norm(NormSpec::Spectral));
    Ok(gammas
        .iter()
        .enumerate()
        .map(|(j, &g)| {
            let subspace_u = pow(g, 2 * q + 1) * leverage;
            let delta = delta_tilde(reference.sigma()[j], j, sigma_hat);
            let triplet = if subspace_u == 0.0 {
                Some(0.0)
            } else if delta > 0.0 {
                let ratio = gamma_tilde / delta;
                Some((1.0 + 2.0 * ratio * ratio).sqrt() * subspace_u)
            } else {
                None
            };
            SingleVectorBound {
                subspace_u,
                subspace_v: pow(g, 2 * q + 2) * leverage,
                triplet,
                gamma_tilde,
                delta_tilde: delta,
            }
        })
        .collect())
}

/// Low-rank approximation error bounds in one unitarily invariant norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowRankBound {
    /// `|||Σ_⊥||| + γ_k^{2q} |||Σ_⊥Ω₂Ω₁†|||`, bounds `|||(I - QQᵀ)A|||`.
    pub residual: f64,
    /// `γ_k^{2q} |||Σ_⊥Ω₂Ω₁†|||`, bounds `|||(I - QQᵀ)A_k|||`.
    pub residual_rank_k: f64,
    /// `(1 + σ_1/σ_k · φγ_k^{2q}/(1 - γ_k) · ω) |||Σ_⊥|||`, bounds
    /// `|||A - QB_k|||`. `None` without a gap.
    pub truncated: Option<f64>,
    /// `sqrt(|||Σ_⊥|||² + γ_k^{4q} |||Σ_⊥Ω₂Ω₁†|||²)`; only for Schatten
    /// norms with `p >= 2`.
    pub residual_schatten: Option<f64>,
}

pub fn lowrank_bounds(
    reference: &ReferenceSvd,
    q: usize,
    split: &OmegaSplit,
    spec: NormSpec,
) -> Result<LowRankBound> {
    let gammas = singular_ratios(reference)?;
    let gamma_k = gammas[reference.k() - 1];
    let perp = reference.gauge_perp(spec);
    let weighted = pow(gamma_k, 2 * q) * split.weighted_norm(spec);
    let truncated = (gamma_k < 1.0).then(|| {
        let sigma_ratio = reference.sigma()[0] / reference.sigma_k();
        let factor = spec.phi() * pow(gamma_k, 2 * q) / (1.0 - gamma_k) * split.leverage();
        (1.0 + sigma_ratio * factor) * perp
    });
    Ok(LowRankBound {
        residual: perp + weighted,
        residual_rank_k: weighted,
        truncated,
        residual_schatten: spec.is_q_norm().then(|| perp.hypot(weighted)),
    })
}

/// The square-root form of the residual bound. Fails for norms that are
/// not Schatten-p with `p >= 2`.
pub fn lowrank_schatten_bound(
    reference: &ReferenceSvd,
    q: usize,
    split: &OmegaSplit,
    spec: NormSpec,
) -> Result<f64> {
    require_q_norm(spec)?;
    Ok(lowrank_bounds(reference, q, split, spec)?
        .residual_schatten
        .expect("q-norm"))
}

fn require_q_norm(spec: NormSpec) -> Result<()> {
    if !spec.is_q_norm() {
        return Err(Error::UnsupportedNorm {
            spec: spec.to_string(),
            reason: "needs a Schatten-p norm with p >= 2",
        });
    }
    Ok(())
}

/// Sandwich for one approximate singular value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaBound {
    pub upper: f64,
    pub lower: f64,
}

/// `σ_j >= σ̂_j >= σ_j / sqrt(1 + γ_j^{4q+2} ω²)` for `j = 1..k`.
pub fn singular_value_bounds(
    reference: &ReferenceSvd,
    q: usize,
    leverage: f64,
) -> Result<Vec<SigmaBound>> {
    let gammas = singular_ratios(reference)?;
    Ok(gammas
        .iter()
        .zip(reference.sigma())
        .map(|(&g, &s)| {
            let t = pow(g, 2 * q + 1) * leverage;
            SigmaBound {
                upper: s,
                lower: s / 1f64.hypot(t),
            }
        })
        .collect())
}

/// Bounds on `|||Σ - Σ'|||`, where `Σ'` carries the approximate singular
/// values padded with zeros.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoffmanWielandtBound {
    pub uin: f64,
    pub schatten: Option<f64>,
}

pub fn hoffman_wielandt_bounds(
    reference: &ReferenceSvd,
    q: usize,
    split: &OmegaSplit,
    spec: NormSpec,
) -> Result<HoffmanWielandtBound> {
    let low = lowrank_bounds(reference, q, split, spec)?;
    Ok(HoffmanWielandtBound {
        uin: low.residual,
        schatten: low.residual_schatten,
    })
}

/// `|||Σ - Σ'|||` for exact values `sigma` and approximate values
/// `sigma_hat` (the shorter list is padded with zeros).
pub fn sigma_error_norm(sigma: &[f64], sigma_hat: &[f64], spec: NormSpec) -> f64 {
    let len = sigma.len().max(sigma_hat.len());
    let mut diff: Vec<f64> = (0..len)
        .map(|i| {
            let s = sigma.get(i).copied().unwrap_or(0.0);
            let t = sigma_hat.get(i).copied().unwrap_or(0.0);
            (s - t).abs()
        })
        .collect();
    diff.sort_by(|a, b| b.total_cmp(a));
    gauge_padded(&diff, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag_reference(sigma: &[f64], k: usize) -> ReferenceSvd {
        let n = sigma.len();
        let a = DenseMatrix::from_diagonal(n, n, sigma).unwrap();
        ReferenceSvd::new(&a, k).unwrap()
    }

    #[test]
    fn ratios_examples() {
        let r = diag_reference(&[4.0, 2.0, 1.0], 2);
        assert_eq!(singular_ratios(&r).unwrap(), vec![0.25, 0.5]);
        let r = diag_reference(&[4.0, 2.0, 0.0], 2);
        assert_eq!(singular_ratios(&r).unwrap(), vec![0.0, 0.0]);
        let r = diag_reference(&[4.0, 0.0, 0.0], 2);
        assert!(matches!(singular_ratios(&r), Err(Error::ZeroSingularValue { index: 2 })));
    }

    #[test]
    fn angle_bound_plug_in() {
        let b = angle_bounds(&[0.0, 1.0], 0, 1.0);
        assert_eq!(b[0].sin_theta, 0.0);
        assert_eq!(b[0].tan_nu, 0.0);
        assert_relative_eq!(b[1].sin_theta, 0.5f64.sqrt(), max_relative = 1e-15);
        assert_eq!(b[1].tan_theta, 1.0);
    }

    #[test]
    fn sigma_lower_plug_in() {
        // γ_1 = 1 is reachable only through the formula, so check it directly.
        let t = pow(1.0, 1);
        assert_relative_eq!(3.0 / 1f64.hypot(t), 3.0 / 2f64.sqrt(), max_relative = 1e-15);
        let r = diag_reference(&[3.0, 2.0, 0.0, 0.0], 2);
        let b = singular_value_bounds(&r, 0, 5.0).unwrap();
        assert_eq!(b[0], SigmaBound { upper: 3.0, lower: 3.0 });
    }

    #[test]
    fn split_of_ideal_guess() {
        let r = diag_reference(&[5.0, 3.0, 2.0, 1.0], 2);
        let omega = r.v_k();
        let split = split_omega(&r, &omega).unwrap();
        assert_eq!(split.leverage(), 0.0);
        assert!((split.omega1() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
        assert_eq!(split.omega2().amax(), 0.0);
    }

    #[test]
    fn split_rejects_orthogonal_guess() {
        let r = diag_reference(&[5.0, 3.0, 2.0, 1.0], 2);
        let omega = DenseMatrix::from_trusted(r.v_perp());
        assert!(matches!(
            split_omega(&r, &omega),
            Err(Error::Omega1RankDeficient { k: 2, .. })
        ));
    }

    #[test]
    fn extraction_phi_and_gap() {
        let r = diag_reference(&[4.0, 2.0, 1.0, 0.5], 2);
        let frob = extraction_bounds(&r, 1, 1.0, NormSpec::FROBENIUS).unwrap();
        let s3 = extraction_bounds(&r, 1, 1.0, NormSpec::Schatten(3.0)).unwrap();
        assert_eq!(frob.phi, 1.0);
        assert_eq!(s3.phi, std::f64::consts::SQRT_2);
        let flat = diag_reference(&[1.0, 1.0, 1.0], 2);
        assert!(matches!(
            extraction_bounds(&flat, 0, 1.0, NormSpec::Spectral),
            Err(Error::NoSpectralGap { .. })
        ));
    }

    #[test]
    fn schatten_residual_needs_q_norm() {
        let r = diag_reference(&[4.0, 2.0, 1.0, 0.5], 2);
        let omega = DenseMatrix::from_fn(4, 3, |i, j| (i + 2 * j) as f64 + 1.0).unwrap();
        let split = split_omega(&r, &omega).unwrap();
        assert!(lowrank_schatten_bound(&r, 0, &split, NormSpec::Schatten(1.5)).is_err());
        assert!(lowrank_schatten_bound(&r, 0, &split, NormSpec::KyFan(2)).is_err());
        let b = lowrank_bounds(&r, 0, &split, NormSpec::FROBENIUS).unwrap();
        assert!(b.residual_schatten.unwrap() <= b.residual);
    }

    #[test]
    fn delta_tilde_reading() {
        assert_eq!(delta_tilde(3.0, 0, &[3.0, 2.5, 1.0]), 0.5);
        assert_eq!(delta_tilde(0.2, 1, &[3.0, 0.2]), 0.2);
        assert_eq!(delta_tilde(2.0, 0, &[1.9, 2.0]), 0.0);
    }

    #[test]
    fn sigma_error_pads() {
        assert_eq!(sigma_error_norm(&[3.0, 2.0, 1.0], &[3.0, 1.5], NormSpec::KyFan(2)), 1.5);
        assert_eq!(sigma_error_norm(&[3.0], &[3.0], NormSpec::Spectral), 0.0);
    }
}
