//! Thin SVD, best rank-k truncation and the pseudoinverse of a small
//! matrix.

use rsvd_diag::linalg::{best_rank_k, pseudoinverse, svd, thin_qr};
use rsvd_diag::{DenseMatrix, SvdMode};

fn main() -> rsvd_diag::Result<()> {
    let a = DenseMatrix::from_row_slice(
        5,
        3,
        &[4.0, 1.0, 0.5, 2.0, 3.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 0.5, 0.5, 0.5],
    )?;

    let (q, r) = thin_qr(&a)?;
    println!("QR: ||QᵀQ - I|| = {:.1e}, R diagonal = {:?}", q.orthonormality_error(), (0..3).map(|i| r[(i, i)]).collect::<Vec<_>>());

    let f = svd(&a, SvdMode::Thin)?;
    println!("singular values: {:?}", f.singular_values);
    println!("reconstruction error: {:.1e}", f.reconstruct().max_abs_diff(&a));

    let full = svd(&a, SvdMode::Full)?;
    println!("full U is {:?}, full V is {:?}", full.u.shape(), full.v.shape());

    let best = best_rank_k(&f, 2)?;
    let err = DenseMatrix::new(a.as_matrix() - best.reconstruct().as_matrix())?;
    println!("rank-2 error (spectral) = {:.6} = sigma_3", rsvd_diag::norms::matrix_norm(&err, rsvd_diag::NormSpec::Spectral)?);

    let p = pseudoinverse(&a, None)?;
    let id = p.matmul(&a)?;
    println!("A⁺A = I to {:.1e}", id.max_abs_diff(&DenseMatrix::identity(3)));
    Ok(())
}
