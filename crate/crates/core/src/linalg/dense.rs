use std::fmt;
use std::ops::{Deref, Mul};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense real matrix with finite entries and at least one row and column.
///
/// Read access goes through [`Deref`] to the underlying [`DMatrix`]; every
/// constructor validates the invariants.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<f64>);

impl DenseMatrix {
    pub fn new(inner: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = inner.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        // nalgebra storage is column-major
        if let Some(pos) = inner.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos % rows,
                col: pos / rows,
            });
        }
        Ok(Self(inner))
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_len(rows, cols, data.len())?;
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn from_column_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_len(rows, cols, data.len())?;
        Self::new(DMatrix::from_column_slice(rows, cols, data))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(DMatrix::from_fn(rows, cols, f))
    }

    /// Diagonal matrix with `diag` on the main diagonal.
    pub fn from_diagonal(rows: usize, cols: usize, diag: &[f64]) -> Result<Self> {
        if diag.len() > rows.min(cols) {
            return Err(Error::ShapeMismatch {
                context: "from_diagonal",
                detail: format!("{} entries do not fit a {rows}x{cols} diagonal", diag.len()),
            });
        }
        let mut m = DMatrix::zeros(rows, cols);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Self::new(m)
    }

    /// # Panics
    /// If `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity of size 0");
        Self(DMatrix::identity(n, n))
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "zero-sized matrix");
        Self(DMatrix::zeros(rows, cols))
    }

    /// Wraps the result of arithmetic on already-validated matrices.
    pub(crate) fn from_trusted(inner: DMatrix<f64>) -> Self {
        debug_assert!(inner.nrows() > 0 && inner.ncols() > 0);
        Self(inner)
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::ShapeMismatch {
                context: "matmul",
                detail: format!(
                    "{}x{} times {}x{}",
                    self.nrows(),
                    self.ncols(),
                    rhs.nrows(),
                    rhs.ncols()
                ),
            });
        }
        Self::new(&self.0 * &rhs.0)
    }

    /// Copy of columns `start..start + len`.
    pub fn columns_range(&self, start: usize, len: usize) -> Result<Self> {
        if len == 0 || start + len > self.ncols() {
            return Err(Error::ShapeMismatch {
                context: "columns_range",
                detail: format!("{start}..{} of {} columns", start + len, self.ncols()),
            });
        }
        Ok(Self(self.0.columns(start, len).into_owned()))
    }

    pub fn column_vec(&self, j: usize) -> Vec<f64> {
        self.0.column(j).iter().copied().collect()
    }

    /// `max |(QᵀQ - I)_ij|`; zero for exactly orthonormal columns.
    pub fn orthonormality_error(&self) -> f64 {
        orthonormality_error(&self.0)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn orthonormality_error(q: &DMatrix<f64>) -> f64 {
    let gram = q.transpose() * q;
    let mut worst = 0.0f64;
    for j in 0..gram.ncols() {
        for i in 0..gram.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

fn check_len(rows: usize, cols: usize, len: usize) -> Result<()> {
    if rows * cols != len {
        return Err(Error::ShapeMismatch {
            context: "matrix data",
            detail: format!("{len} entries for a {rows}x{cols} matrix"),
        });
    }
    Ok(())
}

impl Deref for DenseMatrix {
    type Target = DMatrix<f64>;

    fn deref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl AsRef<DMatrix<f64>> for DenseMatrix {
    fn as_ref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl TryFrom<DMatrix<f64>> for DenseMatrix {
    type Error = Error;

    fn try_from(value: DMatrix<f64>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<DenseMatrix> for DMatrix<f64> {
    fn from(value: DenseMatrix) -> Self {
        value.0
    }
}

/// # Panics
/// On a dimension mismatch, like the nalgebra operator it wraps.
impl Mul<&DenseMatrix> for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix(&self.0 * &rhs.0)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{} {:?}", self.nrows(), self.ncols(), self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_reports_position() {
        let err = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, f64::NAN, 4.0]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 1, col: 0 }));
        let err = DenseMatrix::from_row_slice(1, 2, &[1.0, f64::INFINITY]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(
            DenseMatrix::new(DMatrix::zeros(0, 3)),
            Err(Error::EmptyMatrix { rows: 0, cols: 3 })
        ));
    }

    #[test]
    fn rejects_wrong_data_length() {
        assert!(DenseMatrix::from_row_slice(2, 2, &[1.0; 3]).is_err());
    }

    #[test]
    fn matmul_checks_shapes() {
        let a = DenseMatrix::zeros(2, 3);
        let b = DenseMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::ShapeMismatch { .. })));
        assert_eq!(a.matmul(&b.transpose()).unwrap().shape(), (2, 2));
    }

    #[test]
    fn identity_is_orthonormal() {
        assert_eq!(DenseMatrix::identity(4).orthonormality_error(), 0.0);
    }
}
