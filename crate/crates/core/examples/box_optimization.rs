//! Extreme least-squares slope when both x and y vary inside intervals.

use nufreg::{solve_box, BoxProblem, Coefficient, Interval, OptimizerConfig, Sense};

fn main() -> nufreg::Result<()> {
    let x = vec![
        Interval::new(0.8, 1.2)?,
        Interval::new(1.9, 2.1)?,
        Interval::new(2.7, 3.4)?,
        Interval::new(4.0, 4.2)?,
    ];
    let y = vec![
        Interval::new(1.5, 2.5)?,
        Interval::new(3.8, 4.4)?,
        Interval::new(5.5, 6.9)?,
        Interval::new(7.9, 8.3)?,
    ];
    let config = OptimizerConfig::default();
    for sense in [Sense::Minimize, Sense::Maximize] {
        let p = BoxProblem::new(x.clone(), y.clone(), Coefficient::Slope, sense)?;
        println!("{sense:?} slope: {:.6}", solve_box(&p, &config)?);
    }
    Ok(())
}
