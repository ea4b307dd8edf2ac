//! Forecasting new fuzzy inputs from a fitted model.

use nufreg::{
    benchmark, build_rule_base, fit_nonuniform, predict, OptimizerConfig, SpreadConfig,
    TrapezoidalFuzzyNumber,
};

fn main() -> nufreg::Result<()> {
    let data = benchmark::dataset();
    let spreads = SpreadConfig::from_data(&data)?;
    let model = fit_nonuniform(&data, 21, &OptimizerConfig::default(), &spreads)?;
    let rules = build_rule_base(&model, &data)?;

    let inputs = [
        TrapezoidalFuzzyNumber::crisp(2.0),
        TrapezoidalFuzzyNumber::new(2.5, 3.0, 3.0, 3.5)?,
        TrapezoidalFuzzyNumber::crisp(6.0),
    ];
    for x in inputs {
        let f = predict(&model, &rules, &x)?;
        println!("x = {x}");
        println!("  response {:.4}", f.response);
        for (rule, w) in &f.activations {
            println!("  rule {} weight {w:.4}", rule + 1);
        }
    }
    Ok(())
}
