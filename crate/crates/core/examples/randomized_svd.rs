//! Randomized subspace iteration on a test matrix, compared with the exact
//! singular values for a few power counts.

use rsvd_diag::linalg::singular_values;
use rsvd_diag::{rand_svd, SketchConfig, TestMatrixSpec, Variant};

fn main() -> rsvd_diag::Result<()> {
    let a = TestMatrixSpec::preset("GapMedium", 0).unwrap().generate()?;
    let exact = singular_values(&a)?;
    for q in 0..3 {
        let config = SketchConfig::new(25, 20, q, 1);
        let omega = config.starting_guess(a.ncols())?;
        let approx = rand_svd(&a, &omega, q, Variant::Practical)?;
        let rank_k = approx.truncated(config.k)?;
        let worst = (0..config.k)
            .map(|j| (exact[j] - rank_k.sigma_hat_k[j]) / exact[j])
            .fold(0.0f64, f64::max);
        println!(
            "q={q}: sigma_1 {:.6} (exact {:.6}), max relative error over j<=25 {:.2e}",
            approx.sigma_hat[0], exact[0], worst
        );
    }

    let config = SketchConfig::new(25, 20, 1, 1).with_variant(Variant::Idealized);
    let omega = config.starting_guess(a.ncols())?;
    let ideal = rand_svd(&a, &omega, 1, config.variant)?;
    println!("idealized variant, q=1: sigma_25 {:.6} (exact {:.6})", ideal.sigma_hat[24], exact[24]);
    Ok(())
}
