//! Canonical angles between subspaces and between individual vectors.
//!
//! Sines come from `(I - MMᵀ)N` and cosines from `MᵀN`. The sine route keeps
//! full relative accuracy for small angles, so every bound comparison uses
//! it; the cosines are carried along for tangents and cross-checks.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{orthonormality_error, project_out, singular_values_raw, DenseMatrix};
use crate::norms::{gauge, NormSpec};

const ORTHONORMAL_TOL: f64 = 1e-10;
const UNIT_TOL: f64 = 1e-10;

/// Canonical angles `0 <= θ_1 <= ... <= θ_k <= π/2` between an
/// `ℓ`-dimensional and a `k`-dimensional subspace (`ℓ >= k`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    /// `sin θ_j`, ascending.
    pub sines: Vec<f64>,
    /// `cos θ_j`, in the same order (descending).
    pub cosines: Vec<f64>,
    /// `(dim M, dim N)`.
    pub dims: (usize, usize),
}

impl AngleSet {
    pub fn len(&self) -> usize {
        self.sines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sines.is_empty()
    }

    /// `sin θ_k`, the sine of the largest angle.
    pub fn max_sine(&self) -> f64 {
        self.sines.last().copied().unwrap_or(0.0)
    }

    /// Sines in descending order, as a gauge function expects them.
    pub fn sines_descending(&self) -> Vec<f64> {
        self.sines.iter().rev().copied().collect()
    }

    /// `tan θ_j`; infinite where the cosine vanishes.
    pub fn tangents(&self) -> Vec<f64> {
        self.sines
            .iter()
            .zip(&self.cosines)
            .map(|(s, c)| if *c > 0.0 { s / c } else { f64::INFINITY })
            .collect()
    }
}

fn check_orthonormal(m: &DMatrix<f64>) -> Result<()> {
    let deviation = orthonormality_error(m);
    if !(deviation <= ORTHONORMAL_TOL) {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

fn check_unit(x: &[f64]) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !((norm - 1.0).abs() <= UNIT_TOL) {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// Canonical angles between `range(M)` and `range(N)` for matrices with
/// orthonormal columns and `cols(M) >= cols(N)`.
pub fn canonical_angles(m: &DenseMatrix, n: &DenseMatrix) -> Result<AngleSet> {
    if m.nrows() != n.nrows() {
        return Err(Error::ShapeMismatch {
            context: "canonical_angles",
            detail: format!("ambient dimensions {} and {}", m.nrows(), n.nrows()),
        });
    }
    if m.ncols() < n.ncols() {
        return Err(Error::ShapeMismatch {
            context: "canonical_angles",
            detail: format!("dim M = {} < dim N = {}", m.ncols(), n.ncols()),
        });
    }
    check_orthonormal(m.as_matrix())?;
    check_orthonormal(n.as_matrix())?;
    Ok(angles_unchecked(m.as_matrix(), n.as_matrix())?)
}

pub(crate) fn angles_unchecked(m: &DMatrix<f64>, n: &DMatrix<f64>) -> Result<AngleSet> {
    let k = n.ncols();
    let residual = project_out(m, n);
    let mut sines = singular_values_raw(&residual)?;
    sines.truncate(k);
    sines.iter_mut().for_each(|s| *s = s.min(1.0));
    sines.reverse();

    let overlap = m.tr_mul(n);
    let mut cosines = singular_values_raw(&overlap)?;
    cosines.truncate(k);
    cosines.iter_mut().for_each(|c| *c = c.min(1.0));

    Ok(AngleSet {
        sines,
        cosines,
        dims: (m.ncols(), k),
    })
}

/// `|||sin ∠(M, N)|||`: the gauge of the sines. The spectral norm gives the
/// sine of the largest angle.
pub fn sin_angle_norm(m: &DenseMatrix, n: &DenseMatrix, spec: NormSpec) -> Result<f64> {
    let angles = canonical_angles(m, n)?;
    gauge(&angles.sines_descending(), spec)
}

/// Sine of the angle between the unit vector `x` and `range(M)`:
/// `‖(I - MMᵀ)x‖₂`.
pub fn vector_subspace_angle(x: &[f64], m: &DenseMatrix) -> Result<f64> {
    if x.len() != m.nrows() {
        return Err(Error::ShapeMismatch {
            context: "vector_subspace_angle",
            detail: format!("vector of length {} against {} rows", x.len(), m.nrows()),
        });
    }
    check_unit(x)?;
    check_orthonormal(m.as_matrix())?;
    let x = DMatrix::from_column_slice(x.len(), 1, x);
    Ok(project_out(m.as_matrix(), &x).norm().min(1.0))
}

/// Sine of the angle between the lines spanned by unit vectors `x` and `y`;
/// flipping the sign of either vector does not change it.
pub fn vector_vector_angle(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            context: "vector_vector_angle",
            detail: format!("lengths {} and {}", x.len(), y.len()),
        });
    }
    check_unit(x)?;
    check_unit(y)?;
    Ok(line_sine(x, y))
}

/// `‖x - (xᵀy) y‖` for unit `y`. Equal to `sqrt(1 - (xᵀy)²)` but accurate
/// for nearly parallel lines.
pub(crate) fn line_sine(x: &[f64], y: &[f64]) -> f64 {
    let xv = DVector::from_column_slice(x);
    let yv = DVector::from_column_slice(y);
    let c = xv.dot(&yv);
    (xv - yv * c).norm().min(1.0)
}
