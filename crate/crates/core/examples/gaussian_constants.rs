//! Expectation and tail constants for Gaussian starting guesses, and the
//! number of power iterations they call for.

use rsvd_diag::bounds::{gaussian_constants, required_iterations, singular_ratios};
use rsvd_diag::{ReferenceSvd, TestMatrixSpec};

fn main() -> rsvd_diag::Result<()> {
    for rho in [2, 5, 10, 20, 40] {
        let c = gaussian_constants(300, 25, rho, 0.1)?;
        println!("rho={rho:>2}: C_e = {:8.4}, C_d = {:8.4}", c.c_e, c.c_d);
    }

    let c = gaussian_constants(300, 25, 20, 0.1)?;
    for name in ["GapLarge", "NoiseSmall", "DecayFast"] {
        let a = TestMatrixSpec::preset(name, 0).unwrap().generate()?;
        let gamma_k = singular_ratios(&ReferenceSvd::new(&a, 25)?)?[24];
        let q = required_iterations(1e-2, c.c_e, gamma_k)?;
        println!("{name:<11} gamma_k = {gamma_k:.4}: q = {q} for eps = 1e-2");
    }
    Ok(())
}
