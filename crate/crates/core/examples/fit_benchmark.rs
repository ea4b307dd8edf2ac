//! Full fit on the five-point benchmark: coefficients and per-observation spreads.

use nufreg::{benchmark, fit_nonuniform, OptimizerConfig, SpreadConfig};

fn main() -> nufreg::Result<()> {
    let data = benchmark::dataset();
    let spreads = SpreadConfig::from_data(&data)?;
    let model = fit_nonuniform(&data, 21, &OptimizerConfig::default(), &spreads)?;

    println!("y = {:.4} + {:.4} x", model.b0_c, model.b1_c);
    println!("l_min = {}, r_min = {}", spreads.l_min, spreads.r_min);
    for (i, (t, d)) in model.error_terms.iter().zip(&model.per_obs_discrepancy).enumerate() {
        println!("obs {}: error term {}, D = {d:.4}", i + 1, t.trapezoid());
    }
    println!("total D = {:.4}", model.total_discrepancy);
    Ok(())
}
