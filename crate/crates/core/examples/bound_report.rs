//! Every bound for one matrix and sketch, next to the value it bounds.

use rsvd_diag::bounds::{evaluate, Direction, EvalOptions};
use rsvd_diag::{NormSpec, ReferenceSvd, SketchConfig, TestMatrixSpec};

fn main() -> rsvd_diag::Result<()> {
    let a = TestMatrixSpec::preset("GapLarge", 0).unwrap().generate()?;
    let reference = ReferenceSvd::new(&a, 25)?;
    let config = SketchConfig::new(25, 20, 1, 0);
    let options = EvalOptions {
        norm_specs: vec![NormSpec::Spectral, NormSpec::FROBENIUS, NormSpec::Schatten(4.0)],
        delta: Some(0.1),
    };
    let report = evaluate(&a, &reference, &config, &options)?;

    println!("gamma_k = {:.4}, leverage = {:.3}, zeta = {:.4}", report.gammas[24], report.leverage, report.zeta);
    println!("{:<28} {:>4} {:>10} {:>12} {:>12}", "quantity", "j", "norm", "measured", "bound");
    for e in &report.entries {
        // Per-index rows only at j = 1 and j = k to keep the table short.
        if matches!(e.j, Some(j) if j != 1 && j != 25) {
            continue;
        }
        let tag = match e.quantity.direction() {
            Direction::Lower => " (lower)",
            Direction::Statistical => " (stat.)",
            Direction::Unproven => " (unproven)",
            Direction::Upper => "",
        };
        println!(
            "{:<28} {:>4} {:>10} {:>12.4e} {:>12.4e}",
            format!("{}{tag}", e.quantity),
            e.j.map_or(String::new(), |j| j.to_string()),
            e.norm.map_or(String::new(), |n| n.to_string()),
            e.measured,
            e.bound
        );
    }
    for s in &report.skipped {
        println!("skipped {} j={:?}: {}", s.quantity, s.j, s.reason);
    }
    println!("all deterministic bounds hold: {}", report.master_holds());
    Ok(())
}
