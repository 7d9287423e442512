#[path = "common/oracle.rs"]
mod oracle;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rsvd_diag::bounds::{
    angle_bounds, angle_norm_bounds, delta_tilde, evaluate, evaluate_with_guess, extraction_bounds,
    gaussian_constants, lowrank_bounds, lowrank_schatten_bound, probabilistic_angle_bounds,
    required_iterations, sigma_error_norm, singular_ratios, split_omega, Direction, EvalOptions,
    Quantity,
};
use rsvd_diag::linalg::thin_qr;
use rsvd_diag::sketch::gaussian_guess;
use rsvd_diag::{DenseMatrix, Error, NormSpec, ReferenceSvd, SketchConfig, TestMatrixSpec};

fn rows(a: &nalgebra::DMatrix<f64>) -> oracle::Mat {
    oracle::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * y.abs().max(1e-300)
}

#[test]
fn leverage_matches_normal_equations() {
    let a = TestMatrixSpec::preset("GapLarge", 0).unwrap().generate().unwrap();
    let reference = ReferenceSvd::new(&a, 25).unwrap();
    let omega = SketchConfig::new(25, 20, 0, 5).starting_guess(300).unwrap();
    let split = split_omega(&reference, &omega).unwrap();
    let expected = oracle::leverage(&rows(split.omega1()), &rows(split.omega2()));
    assert!(close(split.leverage(), expected, 1e-8), "{} vs {expected}", split.leverage());
    assert!(split.sigma_min_omega1() > 0.0);
}

#[test]
fn gammas_match_oracle_spectrum() {
    let a = TestMatrixSpec::preset("GapLarge", 2).unwrap().with_size(40, 5).generate().unwrap();
    let reference = ReferenceSvd::new(&a, 5).unwrap();
    let s = oracle::singular_values(&oracle::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]));
    let gammas = singular_ratios(&reference).unwrap();
    for (j, g) in gammas.iter().enumerate() {
        assert!(close(*g, s[5] / s[j], 1e-9));
    }
    assert!(gammas.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn gaussian_constants_frozen_values() {
    // High-precision evaluations of the closed forms.
    let c = gaussian_constants(300, 25, 20, 0.1).unwrap();
    assert!(close(c.c_e, 16.26656685714101158, 1e-13));
    assert!(close(c.c_d, 25.77675145036604690, 1e-13));
    let c = gaussian_constants(300, 15, 20, 0.05).unwrap();
    assert!(close(c.c_e, 14.46293256592396757, 1e-13));
    assert!(close(c.c_d, 23.29057312353578035, 1e-13));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_constants_match_direct_evaluation(n in 10usize..2000, kf in 0.0f64..1.0, rho in 2usize..50, delta in 1e-6f64..0.99) {
        let k = 1 + ((n - 1) as f64 * kf) as usize;
        let c = gaussian_constants(n, k, rho, delta).unwrap();
        let (ce, cd) = oracle::gaussian_constants(n as f64, k as f64, rho as f64, delta);
        prop_assert!(close(c.c_e, ce, 1e-12));
        prop_assert!(close(c.c_d, cd, 1e-12));
    }

    #[test]
    fn required_iterations_is_minimal(eps in 1e-8f64..0.9, ce in 0.1f64..100.0, gamma in 1e-3f64..0.999) {
        let q = required_iterations(eps, ce, gamma).unwrap();
        let value = |q: usize| gamma.powf((2 * q + 1) as f64) * ce;
        prop_assert!(value(q) <= eps);
        prop_assert!(q == 0 || value(q - 1) > eps);
    }

    #[test]
    fn tail_bounds_dominate_expectation_bounds(gs in prop::collection::vec(0.0f64..0.99, 1..6), q in 0usize..4, rho in 2usize..30, delta in 1e-4f64..0.5) {
        let mut gs = gs;
        gs.sort_by(|a, b| a.total_cmp(b));
        let k = gs.len();
        let b = probabilistic_angle_bounds(&gs, q, 300, k, rho, delta).unwrap();
        for row in &b {
            prop_assert!(row.tail_theta >= row.expectation_theta);
            prop_assert!(row.tail_nu >= row.expectation_nu);
            prop_assert!(row.expectation_nu <= row.expectation_theta);
        }
    }

    #[test]
    fn angle_bounds_shrink_with_q_and_grow_with_j(gs in prop::collection::vec(0.0f64..1.0, 1..8), q in 0usize..5, w in 0.0f64..1e3) {
        let mut gs = gs;
        gs.sort_by(|a, b| a.total_cmp(b));
        let now = angle_bounds(&gs, q, w);
        let next = angle_bounds(&gs, q + 1, w);
        for (a, b) in now.iter().zip(&next) {
            prop_assert!(b.tan_theta <= a.tan_theta && b.sin_theta <= a.sin_theta);
            prop_assert!(a.tan_nu <= a.tan_theta && a.sin_nu <= a.sin_theta);
            prop_assert!(a.sin_theta <= 1.0);
        }
        prop_assert!(now.windows(2).all(|p| p[0].tan_theta <= p[1].tan_theta));
    }

    #[test]
    fn delta_tilde_is_bounded_by_sigma(sigma in 0.0f64..10.0, hat in prop::collection::vec(0.0f64..10.0, 1..8), jf in 0.0f64..1.0) {
        let j = ((hat.len() - 1) as f64 * jf) as usize;
        let d = delta_tilde(sigma, j, &hat);
        prop_assert!(d >= 0.0 && d <= sigma);
        for (i, s) in hat.iter().enumerate() {
            if i != j {
                prop_assert!(d <= (sigma - s).abs());
            }
        }
    }

    #[test]
    fn sigma_error_norm_is_symmetric(a in prop::collection::vec(0.0f64..5.0, 0..6), b in prop::collection::vec(0.0f64..5.0, 0..6)) {
        let x = sigma_error_norm(&a, &b, NormSpec::FROBENIUS);
        let y = sigma_error_norm(&b, &a, NormSpec::FROBENIUS);
        prop_assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn required_iterations_reference_values() {
    assert_eq!(required_iterations(0.01, 16.0, 0.5).unwrap(), 5);
    assert_eq!(required_iterations(0.5, 0.25, 0.9).unwrap(), 0);
    assert_eq!(required_iterations(0.1, 10.0, 0.0).unwrap(), 0);
    assert!(matches!(required_iterations(0.1, 10.0, 1.0), Err(Error::NoSpectralGap { .. })));
    assert!(required_iterations(0.0, 10.0, 0.5).is_err());
}

fn gap_setup(q: usize) -> (ReferenceSvd, rsvd_diag::OmegaSplit) {
    let a = TestMatrixSpec::preset("GapMedium", 1).unwrap().generate().unwrap();
    let reference = ReferenceSvd::new(&a, 15).unwrap();
    let omega = SketchConfig::new(15, 20, q, 4).starting_guess(300).unwrap();
    let split = split_omega(&reference, &omega).unwrap();
    (reference, split)
}

#[test]
fn per_angle_bound_dominates_spectral_norm_bound() {
    let (reference, split) = gap_setup(1);
    for q in 0..3 {
        let gammas = singular_ratios(&reference).unwrap();
        let per = angle_bounds(&gammas, q, split.leverage());
        let norm = angle_norm_bounds(&reference, q, split.leverage(), NormSpec::Spectral).unwrap();
        // At spectral norm |||Σ_⊥||| / σ_k = γ_k, so the two coincide at j = k.
        assert!(close(norm.u_side, per[14].tan_theta, 1e-12));
        assert!(close(norm.v_side, per[14].tan_nu, 1e-12));
    }
}

#[test]
fn spectral_residual_bound_is_below_frobenius() {
    let (reference, split) = gap_setup(0);
    for q in 0..3 {
        let s = lowrank_bounds(&reference, q, &split, NormSpec::Spectral).unwrap();
        let f = lowrank_bounds(&reference, q, &split, NormSpec::FROBENIUS).unwrap();
        assert!(s.residual <= f.residual);
        assert!(s.residual_schatten.unwrap() <= s.residual);
    }
    assert!(matches!(
        lowrank_schatten_bound(&reference, 0, &split, NormSpec::Schatten(1.0)),
        Err(Error::UnsupportedNorm { .. })
    ));
    assert!(extraction_bounds(&reference, 0, split.leverage(), NormSpec::KyFan(5)).is_ok());
}

#[test]
fn split_rejects_rank_deficient_omega1() {
    let a = DenseMatrix::from_diagonal(6, 6, &[6.0, 5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
    let reference = ReferenceSvd::new(&a, 2).unwrap();
    // Columns orthogonal to e1 and e2: Ω₁ = 0.
    let omega = DenseMatrix::from_fn(6, 3, |i, j| if i == j + 2 { 1.0 } else { 0.0 }).unwrap();
    assert!(matches!(split_omega(&reference, &omega), Err(Error::Omega1RankDeficient { .. })));
    let omega = DenseMatrix::from_fn(6, 3, |i, j| if i == j + 2 || (i < 2 && i == j) { 1.0 } else { 0.0 }).unwrap();
    let split = split_omega(&reference, &omega).unwrap();
    assert!(close(split.leverage(), 1.0, 1e-12));
    assert_eq!(split.omega1().shape(), (2, 3));
    assert_eq!(split.omega2().shape(), (4, 3));
}

fn rotated_rank_r(n: usize, r: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut g = |_: usize, _: usize| StandardNormal.sample(&mut rng);
    let u = thin_qr(&DenseMatrix::from_fn(n, r, &mut g).unwrap()).unwrap().0;
    let v = thin_qr(&DenseMatrix::from_fn(n, r, &mut g).unwrap()).unwrap().0;
    let s = nalgebra::DMatrix::from_fn(r, r, |i, j| if i == j { (r - i) as f64 } else { 0.0 });
    DenseMatrix::new(u.as_matrix() * s * v.as_matrix().transpose()).unwrap()
}

#[test]
fn exact_rank_k_gives_zero_angles_and_bounds() {
    let a = rotated_rank_r(40, 6, 3);
    let reference = ReferenceSvd::new(&a, 6).unwrap();
    let config = SketchConfig::new(6, 0, 0, 7);
    let options = EvalOptions { norm_specs: vec![NormSpec::Spectral], delta: None };
    let report = evaluate(&a, &reference, &config, &options).unwrap();
    assert!(report.gammas.iter().all(|g| *g == 0.0));
    for q in [Quantity::SinTheta, Quantity::SinNu, Quantity::TruncationTheta] {
        for e in report.entries_for(q) {
            assert!(e.measured <= 1e-10, "{q} j={:?}: {}", e.j, e.measured);
            // The truncation rows are bounded by the measured rank-ℓ angle.
            if q == Quantity::TruncationTheta {
                assert!(e.bound <= 1e-10);
            } else {
                assert_eq!(e.bound, 0.0);
            }
        }
    }
    assert!(report.master_holds());
}

#[test]
fn no_gap_is_reported() {
    let a = DenseMatrix::identity(10);
    let reference = ReferenceSvd::new(&a, 3).unwrap();
    let config = SketchConfig::new(3, 2, 0, 0);
    let err = evaluate(&a, &reference, &config, &EvalOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoSpectralGap { .. }));
}

#[test]
fn every_deterministic_quantity_is_reported() {
    let (m, n) = (60, 40);
    let a = TestMatrixSpec::preset("NoiseMedium", 2).unwrap().with_size(n, 5).generate().unwrap();
    assert_eq!(a.shape(), (n, n));
    let reference = ReferenceSvd::new(&a, 5).unwrap();
    let config = SketchConfig::new(5, 5, 1, 0);
    let options = EvalOptions {
        norm_specs: vec![NormSpec::Spectral, NormSpec::FROBENIUS, NormSpec::Schatten(4.0), NormSpec::KyFan(3)],
        delta: Some(0.1),
    };
    let report = evaluate(&a, &reference, &config, &options).unwrap();
    for q in Quantity::ALL {
        let present = report.entries_for(*q).count() + report.skipped.iter().filter(|s| s.quantity == *q).count();
        assert!(present > 0, "{q} missing");
    }
    assert!(report.master_holds(), "{:?}", report.violations(1e-8));
    let json = serde_json::to_string(&report).unwrap();
    let back: rsvd_diag::BoundReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.entries.len(), report.entries.len());
    let _ = m;
}

fn gaussian_matrix(seed: u64, m: usize, n: usize, decay: f64) -> DenseMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = DenseMatrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng)).unwrap();
    let scale = nalgebra::DMatrix::from_fn(n, n, |i, j| if i == j { decay.powi(i as i32) } else { 0.0 });
    DenseMatrix::new(g.as_matrix() * scale).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn deterministic_bounds_hold_on_random_matrices(
        seed in any::<u64>(),
        m in 12usize..30,
        n in 8usize..14,
        k in 1usize..4,
        rho in 0usize..4,
        q in 0usize..3,
        decay in 0.3f64..0.95,
    ) {
        let a = gaussian_matrix(seed, m, n, decay);
        let reference = ReferenceSvd::new(&a, k).unwrap();
        let config = SketchConfig::new(k, rho, q, seed);
        let options = EvalOptions {
            norm_specs: vec![NormSpec::Spectral, NormSpec::FROBENIUS, NormSpec::Schatten(1.0), NormSpec::Schatten(3.0), NormSpec::KyFan(2)],
            delta: None,
        };
        let report = match evaluate(&a, &reference, &config, &options) {
            Ok(r) => r,
            Err(Error::NoSpectralGap { .. } | Error::Omega1RankDeficient { .. } | Error::RankDeficientSketch { .. }) => {
                return Err(TestCaseError::reject("degenerate draw"));
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let bad = report.violations(1e-8);
        prop_assert!(bad.is_empty(), "{:?}", bad);
        for e in &report.entries {
            if e.quantity.is_sine() && e.quantity.direction() != Direction::Statistical {
                prop_assert!(e.measured >= 0.0 && e.measured <= 1.0 + 1e-12);
            }
        }
    }
}

#[test]
fn explicit_guess_matches_seeded_guess() {
    let a = TestMatrixSpec::preset("DecaySlow", 0).unwrap().with_size(50, 5).generate().unwrap();
    let reference = ReferenceSvd::new(&a, 5).unwrap();
    let config = SketchConfig::new(5, 3, 1, 21);
    let options = EvalOptions::default();
    let seeded = evaluate(&a, &reference, &config, &options).unwrap();
    let omega = gaussian_guess(50, 8, 21).unwrap();
    let explicit = evaluate_with_guess(&a, &reference, &omega, &config, &options).unwrap();
    assert_eq!(seeded, explicit);
}

#[test]
fn numerically_tied_singular_values_have_no_gap() {
    // σ_1..σ_4 are all 1 up to rounding.
    let a = TestMatrixSpec::preset("DecayFast", 0).unwrap().with_size(30, 4).generate().unwrap();
    let reference = ReferenceSvd::new(&a, 3).unwrap();
    let err = evaluate(&a, &reference, &SketchConfig::new(3, 2, 0, 0), &EvalOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoSpectralGap { .. }));
    let split = split_omega(&reference, &gaussian_guess(30, 5, 0).unwrap()).unwrap();
    assert!(extraction_bounds(&reference, 0, split.leverage(), NormSpec::Spectral).is_err());
    let reference = ReferenceSvd::new(&a, 4).unwrap();
    assert!(evaluate(&a, &reference, &SketchConfig::new(4, 2, 0, 0), &EvalOptions::default()).is_ok());
}
