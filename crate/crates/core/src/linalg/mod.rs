//! Dense factorizations: thin QR, SVD, pseudoinverse and best rank-k
//! truncation.
//!
//! Householder QR and Golub–Kahan SVD come from nalgebra; this module adds
//! the conventions the rest of the crate relies on: nonnegative `R`
//! diagonal, descending singular values, and a deterministic sign for every
//! singular vector pair.

mod dense;

pub use dense::DenseMatrix;
pub(crate) use dense::orthonormality_error;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Which singular vectors [`svd`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SvdMode {
    /// `U` is `m x r`, `V` is `n x r`, with `r = min(m, n)`.
    #[default]
    Thin,
    /// Both singular vector matrices completed to square orthogonal
    /// matrices. The trailing columns span the null spaces and carry no
    /// singular value.
    Full,
}

/// SVD `A = U diag(s) Vᵀ` with `s` sorted in descending order.
///
/// For [`SvdMode::Full`] the vector matrices have more columns than there
/// are singular values; only the first `singular_values.len()` columns
/// take part in the reconstruction.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdFactors {
    pub fn len(&self) -> usize {
        self.singular_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singular_values.is_empty()
    }

    /// `U_r diag(s) V_rᵀ` over the `r = len()` singular triplets.
    pub fn reconstruct(&self) -> DenseMatrix {
        let r = self.len();
        let u = self.u.columns(0, r);
        let v = self.v.columns(0, r);
        let mut us = u.into_owned();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        DenseMatrix::from_trusted(us * v.transpose())
    }
}

/// Leading `k` singular triplets; `u diag(singular_values) vᵀ` is the best
/// rank-`k` approximation in every unitarily invariant norm.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub v: DenseMatrix,
}

impl TruncatedSvd {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.as_matrix().clone();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        DenseMatrix::from_trusted(us * self.v.transpose().as_matrix())
    }
}

/// Thin Householder QR of a tall matrix.
///
/// `Q` is `rows x cols` with orthonormal columns and `R` is upper triangular
/// with a nonnegative diagonal, which makes the factorization unique for full
/// column rank input.
pub fn thin_qr(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::NotTall { rows, cols });
    }
    let (q, r) = qr_nonnegative(a.as_matrix().clone());
    Ok((DenseMatrix::from_trusted(q), DenseMatrix::from_trusted(r)))
}

pub(crate) fn qr_nonnegative(a: DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = a.qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for i in 0..r.nrows() {
        if r[(i, i)] < 0.0 {
            r.row_mut(i).neg_mut();
            q.column_mut(i).neg_mut();
        }
    }
    (q, r)
}

/// Singular value decomposition with descending singular values.
///
/// The largest-magnitude entry of every left singular vector is made
/// nonnegative (first index wins ties) and the sign is carried over to the
/// matching right singular vector.
pub fn svd(a: &DenseMatrix, mode: SvdMode) -> Result<SvdFactors> {
    let (u, s, v) = svd_raw(a.as_matrix())?;
    let (u, v) = match mode {
        SvdMode::Thin => (u, v),
        SvdMode::Full => (complete_columns(&u), complete_columns(&v)),
    };
    Ok(SvdFactors {
        u: DenseMatrix::from_trusted(u),
        singular_values: s,
        v: DenseMatrix::from_trusted(v),
    })
}

pub(crate) fn svd_raw(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let (m, n) = a.shape();
    if n > 0 && m >= 2 * n {
        let (q, r) = qr_nonnegative(a.clone());
        let (ur, s, mut v) = svd_core(&r)?;
        let mut u = q * ur;
        normalize_signs(&mut u, &mut v);
        return Ok((u, s, v));
    }
    svd_core(a)
}

fn svd_core(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let (m, n) = a.shape();
    let r = m.min(n);
    let max_niter = 100 * r.max(10) * r.max(10);
    let svd = a
        .clone()
        .try_svd_unordered(true, true, f64::EPSILON, max_niter)
        .ok_or(Error::SvdNoConvergence { rows: m, cols: n })?;
    let u_raw = svd.u.expect("requested U");
    let vt_raw = svd.v_t.expect("requested V");
    let values = svd.singular_values;

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));

    let mut u = DMatrix::zeros(m, r);
    let mut v = DMatrix::zeros(n, r);
    let mut s = Vec::with_capacity(r);
    for (dst, &src) in order.iter().enumerate() {
        s.push(values[src].max(0.0));
        u.set_column(dst, &u_raw.column(src));
        v.set_column(dst, &vt_raw.row(src).transpose());
    }
    normalize_signs(&mut u, &mut v);
    Ok((u, s, v))
}

/// Singular values only, descending. Tall or wide inputs are first reduced
/// to a square triangular factor by QR.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    singular_values_raw(a.as_matrix())
}

pub(crate) fn singular_values_raw(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(Vec::new());
    }
    let reduced;
    let target = if m >= 2 * n {
        reduced = a.clone().qr().r();
        &reduced
    } else if n >= 2 * m {
        reduced = a.transpose().qr().r();
        &reduced
    } else {
        a
    };
    let (rm, rn) = target.shape();
    let r = rm.min(rn);
    let max_niter = 100 * r.max(10) * r.max(10);
    let svd = target
        .clone()
        .try_svd_unordered(false, false, f64::EPSILON, max_niter)
        .ok_or(Error::SvdNoConvergence { rows: m, cols: n })?;
    let mut s: Vec<f64> = svd.singular_values.iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

fn normalize_signs(u: &mut DMatrix<f64>, v: &mut DMatrix<f64>) {
    for j in 0..u.ncols() {
        let mut pivot = 0.0f64;
        let mut best = -1.0f64;
        for x in u.column(j).iter() {
            if x.abs() > best {
                best = x.abs();
                pivot = *x;
            }
        }
        if pivot < 0.0 {
            u.column_mut(j).neg_mut();
            v.column_mut(j).neg_mut();
        }
    }
}

/// Extends orthonormal columns to a square orthogonal matrix.
fn complete_columns(q: &DMatrix<f64>) -> DMatrix<f64> {
    let complement = orthogonal_complement(q);
    if complement.ncols() == 0 {
        return q.clone();
    }
    let (m, r) = q.shape();
    let mut full = DMatrix::zeros(m, m);
    full.columns_mut(0, r).copy_from(q);
    full.columns_mut(r, m - r).copy_from(&complement);
    full
}

/// Orthonormal basis of `range(q)^⊥` for `q` with orthonormal columns.
///
/// Householder QR of `[q | I]` spans all of `R^m`; its trailing `m - r`
/// columns are orthogonal to `range(q)`.
pub(crate) fn orthogonal_complement(q: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, r) = q.shape();
    if r >= m {
        return DMatrix::zeros(m, 0);
    }
    let mut stacked = DMatrix::zeros(m, r + m);
    stacked.columns_mut(0, r).copy_from(q);
    stacked.columns_mut(r, m).fill_with_identity();
    let (qq, _) = qr_nonnegative(stacked);
    qq.columns(r, m - r).into_owned()
}

/// Moore–Penrose pseudoinverse through the SVD.
///
/// Singular values at or below `rank_tol * σ₁` are treated as zero;
/// `rank_tol` defaults to `max(m, n) * ε`.
pub fn pseudoinverse(a: &DenseMatrix, rank_tol: Option<f64>) -> Result<DenseMatrix> {
    if let Some(tol) = rank_tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("rank_tol must be >= 0, got {tol}")));
        }
    }
    let (m, n) = a.shape();
    let tol = rank_tol.unwrap_or(m.max(n) as f64 * f64::EPSILON);
    Ok(DenseMatrix::from_trusted(pinv_raw(a.as_matrix(), tol)?))
}

pub(crate) fn pinv_raw(a: &DMatrix<f64>, rel_tol: f64) -> Result<DMatrix<f64>> {
    let (m, n) = a.shape();
    let (u, s, v) = svd_raw(a)?;
    let mut out = DMatrix::zeros(n, m);
    let Some(&s1) = s.first() else {
        return Ok(out);
    };
    let threshold = rel_tol * s1;
    for (j, &sj) in s.iter().enumerate() {
        if sj > threshold && sj > 0.0 {
            out += (v.column(j) / sj) * u.column(j).transpose();
        }
    }
    Ok(out)
}

/// Leading `k` triplets of `factors`.
pub fn best_rank_k(factors: &SvdFactors, k: usize) -> Result<TruncatedSvd> {
    let r = factors.len();
    if k == 0 || k > r {
        return Err(Error::RankOutOfRange { k, max: r });
    }
    Ok(TruncatedSvd {
        u: DenseMatrix::from_trusted(factors.u.columns(0, k).into_owned()),
        singular_values: factors.singular_values[..k].to_vec(),
        v: DenseMatrix::from_trusted(factors.v.columns(0, k).into_owned()),
    })
}

/// `a - q (qᵀ a)`: the component of `a` orthogonal to `range(q)`.
pub(crate) fn project_out(q: &DMatrix<f64>, a: &DMatrix<f64>) -> DMatrix<f64> {
    let coeffs = q.transpose() * a;
    a - q * coeffs
}
