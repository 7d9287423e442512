//! Canonical angles between two subspaces, and their norms.

use rsvd_diag::angles::vector_subspace_angle;
use rsvd_diag::{canonical_angles, sin_angle_norm, DenseMatrix, NormSpec};

fn main() -> rsvd_diag::Result<()> {
    // span{e1, e2} against a plane tilted by 0.1 and 0.5 radians.
    let (t1, t2) = (0.1f64, 0.5f64);
    let m = DenseMatrix::from_fn(4, 2, |i, j| if i == j { 1.0 } else { 0.0 })?;
    let n = DenseMatrix::from_row_slice(4, 2, &[t1.cos(), 0.0, 0.0, t2.cos(), t1.sin(), 0.0, 0.0, t2.sin()])?;

    let angles = canonical_angles(&m, &n)?;
    println!("sines:    {:?}", angles.sines);
    println!("expected: {:?}", [t1.sin(), t2.sin()]);
    println!("tangents: {:?}", angles.tangents());
    for spec in [NormSpec::Spectral, NormSpec::FROBENIUS] {
        println!("|||sin angle(M, N)|||_{spec} = {:.6}", sin_angle_norm(&m, &n, spec)?);
    }
    let x = [t1.cos(), 0.0, t1.sin(), 0.0];
    println!("sin angle(x, M) = {:.6}", vector_subspace_angle(&x, &m)?);
    Ok(())
}
