//! Non-uniform error terms against one shared error term for every observation.

use nufreg::{benchmark, fit_nonuniform, fit_uniform_baseline, OptimizerConfig, SpreadConfig};

fn main() -> nufreg::Result<()> {
    let data = benchmark::dataset();
    let spreads = SpreadConfig::from_data(&data)?;
    let model = fit_nonuniform(&data, 21, &OptimizerConfig::default(), &spreads)?;
    let base = fit_uniform_baseline(&data, model.b0_c, model.b1_c)?;

    println!("shared error term: {:.6}", base.term.trapezoid());
    println!("obs  non-uniform  uniform");
    for i in 0..data.len() {
        println!(
            "{:>3}  {:>11.4}  {:>7.4}",
            i + 1,
            model.per_obs_discrepancy[i],
            base.per_obs_discrepancy[i]
        );
    }
    println!("sum  {:>11.4}  {:>7.4}", model.total_discrepancy, base.total_discrepancy);
    Ok(())
}
