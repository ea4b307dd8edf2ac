//! Trapezoidal fuzzy numbers: cuts, membership, affine images, distance.

use nufreg::{coa_defuzzify, discrepancy, TrapezoidalFuzzyNumber};

fn main() -> nufreg::Result<()> {
    let a = TrapezoidalFuzzyNumber::new(1.0, 2.0, 3.0, 5.0)?;
    let b = TrapezoidalFuzzyNumber::triangle(2.5, 1.0)?;

    println!("a = {a}, b = {b}");
    for alpha in [0.0, 0.5, 1.0] {
        println!("  a at alpha {alpha}: {}", a.alpha_cut(alpha)?);
    }
    println!("mu_a(4) = {}", a.membership(4.0));
    println!("a + b = {}", a + b);
    println!("-2a + 1 = {}", a.affine_image(-2.0, 1.0));
    println!("COA(a) = {:.6}", coa_defuzzify(&a)?);
    println!("D(a, b) = {:.6}", discrepancy(&a, &b));
    Ok(())
}
