//! Membership curves of the least-squares intercept and slope.

use nufreg::{benchmark, coa_defuzzify, estimate_coefficient_curves, OptimizerConfig};

fn main() -> nufreg::Result<()> {
    let data = benchmark::dataset();
    let (b0, b1) = estimate_coefficient_curves(&data, 11, &OptimizerConfig::default())?;

    for (name, est) in [("b0", &b0), ("b1", &b1)] {
        println!("{name}: crisp {:.6}, COA {:.6}", est.crisp, coa_defuzzify(&est.curve)?);
        for (alpha, cut) in est.curve.levels() {
            println!("  {alpha:.1}  [{:.4}, {:.4}]", cut.lo, cut.hi);
        }
    }
    Ok(())
}
