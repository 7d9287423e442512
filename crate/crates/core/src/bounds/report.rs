//! One sketch run measured against every bound.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{
    angle_bounds, angle_norm_bounds, extraction_bounds, gaussian_constants, gensintheta_check,
    hoffman_wielandt_bounds, lowrank_bounds, probabilistic_angle_bounds, require_gap,
    sigma_error_norm, sin_theta_gap, single_vector_bounds, singular_ratios, singular_value_bounds,
    split_omega, GaussianConstants, ReferenceSvd,
};
use crate::angles::{angles_unchecked, line_sine};
use crate::error::{Error, Result};
use crate::linalg::{project_out, singular_values_raw, DenseMatrix};
use crate::norms::{gauge_padded, NormSpec};
use crate::sketch::{rand_svd, SketchConfig};

/// Absolute slack allowed by [`BoundReport::master_holds`].
pub const MASTER_SLACK: f64 = 1e-8;

/// Which way a bound points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `measured <= bound`.
    Upper,
    /// `measured >= bound`.
    Lower,
    /// Holds on average or with probability `1 - δ`; a single run may
    /// exceed it.
    Statistical,
    /// `measured <= bound` is claimed but not implied by the argument
    /// behind it; reported, never part of the master check.
    Unproven,
}

macro_rules! quantities {
    ($($variant:ident => $name:literal, $dir:ident, $sine:literal;)*) => {
        /// Bounded quantity. `j` indices and norm specs are carried by
        /// [`BoundEntry`].
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Quantity {
            $($variant,)*
        }

        impl Quantity {
            pub const ALL: &'static [Quantity] = &[$(Quantity::$variant,)*];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $(Quantity::$variant => $name,)*
                }
            }

            pub fn direction(&self) -> Direction {
                match self {
                    $(Quantity::$variant => Direction::$dir,)*
                }
            }

            /// Whether the measured value is the sine of an angle, so a
            /// bound above 1 carries no information.
            pub fn is_sine(&self) -> bool {
                match self {
                    $(Quantity::$variant => $sine,)*
                }
            }
        }
    };
}

quantities! {
    SinTheta => "sin_theta", Upper, true;
    SinNu => "sin_nu", Upper, true;
    TanTheta => "tan_theta", Upper, false;
    TanNu => "tan_nu", Upper, false;
    SinThetaNorm => "sin_theta_norm", Upper, false;
    SinNuNorm => "sin_nu_norm", Upper, false;
    TruncationTheta => "truncation_theta", Upper, true;
    TruncationNu => "truncation_nu", Upper, true;
    GenSinTheta => "gensintheta", Unproven, true;
    GenSinThetaWedin => "gensintheta_wedin", Upper, true;
    ExtractionNorm => "extraction_norm", Upper, false;
    ExtractionAngle => "extraction_angle", Upper, true;
    VectorSubspaceU => "vector_subspace_u", Upper, true;
    VectorSubspaceV => "vector_subspace_v", Upper, true;
    VectorTriplet => "vector_triplet", Upper, true;
    LowrankResidual => "lowrank_residual", Upper, false;
    LowrankResidualRankK => "lowrank_residual_rank_k", Upper, false;
    LowrankTruncated => "lowrank_truncated", Upper, false;
    LowrankResidualSchatten => "lowrank_residual_schatten", Upper, false;
    EckartYoungFloor => "eckart_young_floor", Lower, false;
    SigmaUpper => "sigma_upper", Upper, false;
    SigmaLower => "sigma_lower", Lower, false;
    HoffmanWielandt => "hoffman_wielandt", Upper, false;
    HoffmanWielandtSchatten => "hoffman_wielandt_schatten", Upper, false;
    ProbExpectationTheta => "prob_expectation_theta", Statistical, true;
    ProbExpectationNu => "prob_expectation_nu", Statistical, true;
    ProbTailTheta => "prob_tail_theta", Statistical, true;
    ProbTailNu => "prob_tail_nu", Statistical, true;
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .iter()
            .copied()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown quantity `{s}`")))
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A bound paired with the value it constrains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub quantity: Quantity,
    /// One-based index for per-singular-triplet quantities.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSpec>,
    pub measured: f64,
    pub bound: f64,
    /// Set for sine quantities whose bound exceeds 1.
    #[serde(default)]
    pub exceeds_one: bool,
}

impl BoundEntry {
    pub fn new(quantity: Quantity, j: Option<usize>, norm: Option<NormSpec>, measured: f64, bound: f64) -> Self {
        Self {
            quantity,
            j,
            norm,
            measured,
            bound,
            exceeds_one: quantity.is_sine() && bound > 1.0,
        }
    }

    /// `bound - measured` for upper bounds, `measured - bound` for lower
    /// ones; negative means violated.
    pub fn slack(&self) -> f64 {
        match self.quantity.direction() {
            Direction::Lower => self.measured - self.bound,
            Direction::Upper | Direction::Statistical | Direction::Unproven => {
                self.bound - self.measured
            }
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack() >= -tol
    }
}

/// A bound that could not be evaluated for this run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedBound {
    pub quantity: Quantity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormSpec>,
    pub reason: String,
}

/// Everything evaluated for one `(A, Ω, q)` triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub config: SketchConfig,
    pub shape: (usize, usize),
    /// `γ_1..γ_k`.
    pub gammas: Vec<f64>,
    /// `ω = ‖Ω₂Ω₁†‖₂`.
    pub leverage: f64,
    pub sigma_min_omega1: f64,
    /// `σ_1..σ_ℓ` of `A`.
    pub sigma: Vec<f64>,
    /// `σ̂_1..σ̂_ℓ`.
    pub sigma_hat: Vec<f64>,
    /// `ζ = σ_k(A) - σ_{k+1}(Â)`.
    pub zeta: f64,
    pub gamma_tilde: f64,
    pub delta_tilde: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<GaussianConstants>,
    pub entries: Vec<BoundEntry>,
    #[serde(default)]
    pub skipped: Vec<SkippedBound>,
}

impl BoundReport {
    /// Upper and lower bound entries with slack below `-tol`.
    pub fn violations(&self, tol: f64) -> Vec<&BoundEntry> {
        self.entries
            .iter()
            .filter(|e| {
                matches!(e.quantity.direction(), Direction::Upper | Direction::Lower) && !e.holds(tol)
            })
            .collect()
    }

    /// Every deterministic bound holds to [`MASTER_SLACK`].
    pub fn master_holds(&self) -> bool {
        self.violations(MASTER_SLACK).is_empty()
    }

    pub fn entries_for(&self, quantity: Quantity) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(move |e| e.quantity == quantity)
    }

    /// The entry for `quantity` at one-based index `j` (no norm).
    pub fn entry(&self, quantity: Quantity, j: usize) -> Option<&BoundEntry> {
        self.entries_for(quantity).find(|e| e.j == Some(j))
    }

    /// The entry for `quantity` measured in `norm`.
    pub fn norm_entry(&self, quantity: Quantity, norm: NormSpec) -> Option<&BoundEntry> {
        self.entries_for(quantity).find(|e| e.norm == Some(norm))
    }
}

/// What to evaluate besides the per-index bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub norm_specs: Vec<NormSpec>,
    /// Failure probability for the Gaussian tail bounds; `None` skips the
    /// probabilistic entries.
    pub delta: Option<f64>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            norm_specs: vec![NormSpec::Spectral, NormSpec::FROBENIUS],
            delta: Some(0.1),
        }
    }
}

/// Draws the Gaussian starting guess of `config` and evaluates the report.
pub fn evaluate(
    a: &DenseMatrix,
    reference: &ReferenceSvd,
    config: &SketchConfig,
    options: &EvalOptions,
) -> Result<BoundReport> {
    let (m, n) = a.shape();
    config.validate_for(m, n)?;
    let omega = config.starting_guess(n)?;
    evaluate_with_guess(a, reference, &omega, config, options)
}

/// Evaluates the report for an explicit starting guess. `config.seed` is
/// recorded but not used; the probabilistic entries only make sense for
/// Gaussian guesses.
pub fn evaluate_with_guess(
    a: &DenseMatrix,
    reference: &ReferenceSvd,
    omega: &DenseMatrix,
    config: &SketchConfig,
    options: &EvalOptions,
) -> Result<BoundReport> {
    let (m, n) = a.shape();
    let k = reference.k();
    if reference.shape() != (m, n) {
        return Err(Error::ShapeMismatch {
            context: "evaluate",
            detail: format!("reference is {:?}, A is {:?}", reference.shape(), (m, n)),
        });
    }
    if config.k != k || omega.ncols() != config.ell() {
        return Err(Error::ShapeMismatch {
            context: "evaluate",
            detail: format!(
                "config has k = {}, ell = {}; reference k = {k}, Omega has {} columns",
                config.k,
                config.ell(),
                omega.ncols()
            ),
        });
    }
    let q = config.q;
    let gammas = singular_ratios(reference)?;
    require_gap(reference, &gammas)?;
    let split = split_omega(reference, omega)?;
    let leverage = split.leverage();

    let approx = rand_svd(a, omega, q, config.variant)?;
    let trunc = approx.truncated(k)?;
    let sigma_hat = approx.sigma_hat.clone();

    let u_k = reference.u_k();
    let v_k = reference.v_k();
    let theta = angles_unchecked(approx.u_hat.as_matrix(), u_k.as_matrix())?;
    let nu = angles_unchecked(approx.v_hat.as_matrix(), v_k.as_matrix())?;
    let theta_p = angles_unchecked(trunc.u_hat_k.as_matrix(), u_k.as_matrix())?;
    let nu_p = angles_unchecked(trunc.v_hat_k.as_matrix(), v_k.as_matrix())?;

    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    let mut push = |q: Quantity, j: Option<usize>, norm: Option<NormSpec>, measured: f64, bound: f64| {
        entries.push(BoundEntry::new(q, j, norm, measured, bound));
    };

    let tangents = theta.tangents();
    let nu_tangents = nu.tangents();
    for (j, b) in angle_bounds(&gammas, q, leverage).iter().enumerate() {
        let idx = Some(j + 1);
        push(Quantity::SinTheta, idx, None, theta.sines[j], b.sin_theta);
        push(Quantity::SinNu, idx, None, nu.sines[j], b.sin_nu);
        push(Quantity::TanTheta, idx, None, tangents[j], b.tan_theta);
        push(Quantity::TanNu, idx, None, nu_tangents[j], b.tan_nu);
        push(Quantity::TruncationTheta, idx, None, theta.sines[j], theta_p.sines[j]);
        push(Quantity::TruncationNu, idx, None, nu.sines[j], nu_p.sines[j]);
    }

    let extraction = extraction_bounds(reference, q, leverage, NormSpec::Spectral)?;
    for (j, bound) in extraction.per_j.iter().enumerate() {
        let measured = theta_p.sines[j].max(nu_p.sines[j]);
        push(Quantity::ExtractionAngle, Some(j + 1), None, measured, *bound);
    }

    let u_full = approx.u_hat.as_matrix();
    let v_full = approx.v_hat.as_matrix();
    let singles = single_vector_bounds(reference, q, &split, &sigma_hat)?;
    let factors = reference.factors();
    for (j, b) in singles.iter().enumerate() {
        let idx = Some(j + 1);
        let u_j = factors.u.column(j).into_owned();
        let v_j = factors.v.column(j).into_owned();
        let u_col = DMatrix::from_column_slice(m, 1, u_j.as_slice());
        let v_col = DMatrix::from_column_slice(n, 1, v_j.as_slice());
        let su = project_out(u_full, &u_col).norm().min(1.0);
        let sv = project_out(v_full, &v_col).norm().min(1.0);
        push(Quantity::VectorSubspaceU, idx, None, su, b.subspace_u);
        push(Quantity::VectorSubspaceV, idx, None, sv, b.subspace_v);
        let triplet_measured = line_sine(u_j.as_slice(), approx.u_hat.column(j).as_slice())
            .max(line_sine(v_j.as_slice(), approx.v_hat.column(j).as_slice()));
        match b.triplet {
            Some(bound) => push(Quantity::VectorTriplet, idx, None, triplet_measured, bound),
            None => skipped.push(SkippedBound {
                quantity: Quantity::VectorTriplet,
                j: idx,
                norm: None,
                reason: Error::DegenerateCluster { j: j + 1 }.to_string(),
            }),
        }
    }

    for (j, b) in singular_value_bounds(reference, q, leverage)?.iter().enumerate() {
        push(Quantity::SigmaUpper, Some(j + 1), None, sigma_hat[j], b.upper);
        push(Quantity::SigmaLower, Some(j + 1), None, sigma_hat[j], b.lower);
    }

    // Singular values of the three residual matrices, shared by all norms.
    let q_basis = approx.q.as_matrix();
    let residual_matrix = project_out(q_basis, a.as_matrix());
    let residual = singular_values_raw(&residual_matrix)?;
    let a_k_factor = {
        let mut us = u_k.as_matrix().clone();
        for j in 0..k {
            us.column_mut(j).scale_mut(reference.sigma()[j]);
        }
        us
    };
    // (A - Â) V_k, which equals (I - QQᵀ) U_k Σ_k.
    let residual_vk = project_out(q_basis, &a_k_factor);
    let residual_k = singular_values_raw(&residual_vk)?;
    let truncated_err = singular_values_raw(&(a.as_matrix() - trunc.reconstruct().as_matrix()))?;
    let ell = config.ell();
    let tail: &[f64] = reference.sigma().get(ell..).unwrap_or(&[]);

    // Wedin's residuals E₁₂ = (I - P_{Û_k})(A - Â)P_{V_k} and
    // E₂₁ = P_{U_k}(A - Â)(I - P_{V̂_k}); only their spectral norms matter.
    let e12 = project_out(trunc.u_hat_k.as_matrix(), &residual_vk);
    let e21 = project_out(trunc.v_hat_k.as_matrix(), &residual_matrix.tr_mul(u_k.as_matrix()));
    let wedin = singular_values_raw(&e12)?[0].max(singular_values_raw(&e21)?[0]);
    match gensintheta_check(reference, &sigma_hat, &theta_p.sines, &nu_p.sines) {
        Ok(rows) => {
            let zeta = sin_theta_gap(reference, &sigma_hat);
            for (j, row) in rows.iter().enumerate() {
                push(Quantity::GenSinTheta, Some(j + 1), None, row.measured, row.bound);
                let scale = reference.sigma_k() / reference.sigma()[j];
                push(Quantity::GenSinThetaWedin, Some(j + 1), None, row.measured, scale * wedin / zeta);
            }
        }
        Err(e) => skipped.push(SkippedBound {
            quantity: Quantity::GenSinTheta,
            j: None,
            norm: None,
            reason: e.to_string(),
        }),
    }


    let theta_desc = theta.sines_descending();
    let nu_desc = nu.sines_descending();
    let theta_p_desc = theta_p.sines_descending();
    let nu_p_desc = nu_p.sines_descending();
    for &spec in &options.norm_specs {
        let norm = Some(spec);
        let sides = angle_norm_bounds(reference, q, leverage, spec)?;
        push(Quantity::SinThetaNorm, None, norm, gauge_padded(&theta_desc, spec), sides.u_side);
        push(Quantity::SinNuNorm, None, norm, gauge_padded(&nu_desc, spec), sides.v_side);

        let ext = extraction_bounds(reference, q, leverage, spec)?;
        let measured = gauge_padded(&theta_p_desc, spec).max(gauge_padded(&nu_p_desc, spec));
        push(Quantity::ExtractionNorm, None, norm, measured, ext.norm_bound);

        let low = lowrank_bounds(reference, q, &split, spec)?;
        let res = gauge_padded(&residual, spec);
        push(Quantity::LowrankResidual, None, norm, res, low.residual);
        push(Quantity::LowrankResidualRankK, None, norm, gauge_padded(&residual_k, spec), low.residual_rank_k);
        if let Some(bound) = low.truncated {
            push(Quantity::LowrankTruncated, None, norm, gauge_padded(&truncated_err, spec), bound);
        }
        if let Some(bound) = low.residual_schatten {
            push(Quantity::LowrankResidualSchatten, None, norm, res, bound);
        }
        push(Quantity::EckartYoungFloor, None, norm, res, gauge_padded(tail, spec));

        let hw = hoffman_wielandt_bounds(reference, q, &split, spec)?;
        let hw_measured = sigma_error_norm(reference.sigma(), &sigma_hat, spec);
        push(Quantity::HoffmanWielandt, None, norm, hw_measured, hw.uin);
        if let Some(bound) = hw.schatten {
            push(Quantity::HoffmanWielandtSchatten, None, norm, hw_measured, bound);
        }
    }

    let mut constants = None;
    if let Some(delta) = options.delta {
        match probabilistic_angle_bounds(&gammas, q, n, k, config.rho, delta) {
            Ok(rows) => {
                constants = Some(gaussian_constants(n, k, config.rho, delta)?);
                for (j, b) in rows.iter().enumerate() {
                    let idx = Some(j + 1);
                    push(Quantity::ProbExpectationTheta, idx, None, theta.sines[j], b.expectation_theta);
                    push(Quantity::ProbExpectationNu, idx, None, nu.sines[j], b.expectation_nu);
                    push(Quantity::ProbTailTheta, idx, None, theta.sines[j], b.tail_theta);
                    push(Quantity::ProbTailNu, idx, None, nu.sines[j], b.tail_nu);
                }
            }
            Err(e) => skipped.push(SkippedBound {
                quantity: Quantity::ProbExpectationTheta,
                j: None,
                norm: None,
                reason: e.to_string(),
            }),
        }
    }

    let gamma_tilde = singles.first().map(|b| b.gamma_tilde).unwrap_or(0.0);
    Ok(BoundReport {
        config: *config,
        shape: (m, n),
        gammas,
        leverage,
        sigma_min_omega1: split.sigma_min_omega1(),
        sigma: reference.sigma().iter().take(ell).copied().collect(),
        zeta: sin_theta_gap(reference, &sigma_hat),
        sigma_hat,
        gamma_tilde,
        delta_tilde: singles.iter().map(|b| b.delta_tilde).collect(),
        constants,
        entries,
        skipped,
    })
}
