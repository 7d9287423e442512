//! The nine preset test matrices and the shape of their spectra.

use rsvd_diag::linalg::singular_values;
use rsvd_diag::TestMatrixSpec;

fn main() -> rsvd_diag::Result<()> {
    println!("{:<12} {:>10} {:>10} {:>10} {:>10} {:>10}", "matrix", "shape", "s1", "s15", "s16", "s100");
    for spec in TestMatrixSpec::suite(0) {
        let a = spec.generate()?;
        let s = singular_values(&a)?;
        let (m, n) = a.shape();
        println!(
            "{:<12} {:>10} {:>10.3e} {:>10.3e} {:>10.3e} {:>10.3e}",
            spec.label(),
            format!("{m}x{n}"),
            s[0],
            s[14],
            s[15],
            s[99]
        );
    }
    let small = TestMatrixSpec::preset("DecayFast", 7).unwrap().with_size(40, 5);
    println!("{} is {:?}", small.label(), small.shape());
    Ok(())
}

