//! Bounds that hold in expectation or with high probability when the
//! starting guess is standard Gaussian.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C_e` bounds the expected leverage, `C_d` bounds it with probability at
/// least `1 - δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianConstants {
    pub c_e: f64,
    pub c_d: f64,
    pub delta: f64,
}

/// ```text
/// C_e = sqrt(k/(ρ-1)) + e sqrt((k+ρ)(n-k)) / ρ
/// C_d = e sqrt(k+ρ)/(ρ+1) (2/δ)^{1/(ρ+1)} (sqrt(n-k) + sqrt(k+ρ) + sqrt(2 ln(2/δ)))
/// ```
pub fn gaussian_constants(n: usize, k: usize, rho: usize, delta: f64) -> Result<GaussianConstants> {
    if rho < 2 {
        return Err(Error::InvalidParameter(format!(
            "Gaussian constants need rho >= 2, got {rho}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if k == 0 || k > n {
        return Err(Error::RankOutOfRange { k, max: n });
    }
    let (n, k, rho) = (n as f64, k as f64, rho as f64);
    let c_e = (k / (rho - 1.0)).sqrt() + E * ((k + rho) * (n - k)).sqrt() / rho;
    let log_term = (2.0 * (2.0 / delta).ln()).sqrt();
    let c_d = E * (k + rho).sqrt() / (rho + 1.0)
        * (2.0 / delta).powf(1.0 / (rho + 1.0))
        * ((n - k).sqrt() + (k + rho).sqrt() + log_term);
    Ok(GaussianConstants { c_e, c_d, delta })
}

/// Expectation and tail bounds for one angle pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbAngleBound {
    pub expectation_theta: f64,
    pub expectation_nu: f64,
    pub tail_theta: f64,
    pub tail_nu: f64,
}

/// The deterministic angle bounds with `ω` replaced by `C_e` (expectation)
/// and `C_d` (tail). The tail bound uses `γ_j` in both numerator and
/// denominator.
pub fn probabilistic_angle_bounds(
    gammas: &[f64],
    q: usize,
    n: usize,
    k: usize,
    rho: usize,
    delta: f64,
) -> Result<Vec<ProbAngleBound>> {
    let gamma_k = gammas.last().copied().unwrap_or(0.0);
    if !(gamma_k < 1.0) {
        return Err(Error::NoSpectralGap { k, gamma_k });
    }
    let c = gaussian_constants(n, k, rho, delta)?;
    let sine = |g: f64, e: usize, c: f64| {
        let t = g.powf(e as f64) * c;
        t / 1f64.hypot(t)
    };
    Ok(gammas
        .iter()
        .map(|&g| ProbAngleBound {
            expectation_theta: sine(g, 2 * q + 1, c.c_e),
            expectation_nu: sine(g, 2 * q + 2, c.c_e),
            tail_theta: sine(g, 2 * q + 1, c.c_d),
            tail_nu: sine(g, 2 * q + 2, c.c_d),
        })
        .collect())
}

/// Smallest `q >= 0` with `γ_k^{2q+1} C_e <= ε`, i.e. the smallest integer
/// with `q >= (log(ε/C_e)/log γ_k - 1) / 2`.
///
/// Returns 0 when `γ_k = 0`.
pub fn required_iterations(epsilon: f64, c_e: f64, gamma_k: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(c_e > 0.0 && c_e.is_finite()) {
        return Err(Error::InvalidParameter(format!("C_e must be positive, got {c_e}")));
    }
    if !(gamma_k >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma_k must be nonnegative, got {gamma_k}"
        )));
    }
    if gamma_k >= 1.0 {
        return Err(Error::NoSpectralGap { k: 0, gamma_k });
    }
    if gamma_k == 0.0 {
        return Ok(0);
    }
    let meets = |q: usize| gamma_k.powf((2 * q + 1) as f64) * c_e <= epsilon;
    let estimate = 0.5 * ((epsilon / c_e).ln() / gamma_k.ln() - 1.0);
    let mut q = if estimate > 0.0 { estimate.ceil() as usize } else { 0 };
    // The closed form can be off by one in floating point; settle it with
    // the inequality itself.
    while !meets(q) {
        q += 1;
    }
    while q > 0 && meets(q - 1) {
        q -= 1;
    }
    Ok(q)
}
