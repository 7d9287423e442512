//! Unitarily invariant norms as gauges of the singular values.

use rsvd_diag::norms::{gauge, matrix_norm};
use rsvd_diag::{DenseMatrix, NormSpec};

fn main() -> rsvd_diag::Result<()> {
    let a = DenseMatrix::from_diagonal(4, 4, &[3.0, 2.0, 1.0, 0.5])?;
    for text in ["spectral", "frobenius", "schatten:1", "schatten:4", "kyfan:2"] {
        let spec: NormSpec = text.parse()?;
        println!("{spec:>12}: {:.6}", matrix_norm(&a, spec)?);
    }
    // The same numbers straight from the singular values.
    let sv = [3.0, 2.0, 1.0, 0.5];
    println!("nuclear from gauge: {}", gauge(&sv, NormSpec::Schatten(1.0))?);
    println!("bad spec: {}", "schatten:0.5".parse::<NormSpec>().unwrap_err());
    Ok(())
}
