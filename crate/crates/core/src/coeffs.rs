//! Membership curves of the fuzzy least-squares coefficients.
//!
//! Each α level of the curve is the range of the slope (or intercept)
//! estimator when every observation is allowed to move inside its α-cut. The
//! curve is sampled on a uniform α grid and defuzzified to a crisp value by
//! center of area.

use log::warn;

use crate::boxopt::{self, BoxProblem, Coefficient, OptimizerConfig, Sense};
use crate::error::{FitError, Result};
use crate::fuznum::{
    coa_defuzzify, Interval, MembershipShape, PiecewiseMembership, TrapezoidalFuzzyNumber,
};

pub const DEFAULT_ALPHA_LEVELS: usize = 21;

/// Nesting repairs above this size are reported as solver-quality warnings.
pub const REPAIR_WARN_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyObservation {
    pub x: TrapezoidalFuzzyNumber,
    pub y: TrapezoidalFuzzyNumber,
}

impl FuzzyObservation {
    pub fn new(x: TrapezoidalFuzzyNumber, y: TrapezoidalFuzzyNumber) -> Self {
        FuzzyObservation { x, y }
    }

    /// Crisp explanatory value paired with a fuzzy response.
    pub fn crisp_x(x: f64, y: TrapezoidalFuzzyNumber) -> Self {
        FuzzyObservation {
            x: TrapezoidalFuzzyNumber::crisp(x),
            y,
        }
    }
}

/// `L` evenly spaced levels `0, 1/(L−1), …, 1`.
pub fn alpha_grid(levels: usize) -> Result<Vec<f64>> {
    if levels < 2 {
        return Err(FitError::Invalid(format!(
            "need at least 2 alpha levels, got {levels}"
        )));
    }
    let last = (levels - 1) as f64;
    Ok((0..levels).map(|k| k as f64 / last).collect())
}

/// A membership function sampled as a nested family of α-cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipCurve {
    levels: Vec<(f64, Interval)>,
}

impl MembershipCurve {
    pub fn new(levels: Vec<(f64, Interval)>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(FitError::Invalid("curve needs at least 2 levels".into()));
        }
        if levels[0].0 != 0.0 || levels[levels.len() - 1].0 != 1.0 {
            return Err(FitError::Invalid(
                "curve levels must start at alpha 0 and end at alpha 1".into(),
            ));
        }
        for w in levels.windows(2) {
            let ((a0, c0), (a1, c1)) = (w[0], w[1]);
            if !(a1 > a0) {
                return Err(FitError::Invalid(format!(
                    "curve alphas must increase strictly, got {a0} then {a1}"
                )));
            }
            if !c1.is_subset_of(&c0) {
                return Err(FitError::Invalid(format!(
                    "cut {c1} at alpha {a1} is not nested in cut {c0} at alpha {a0}"
                )));
            }
        }
        for (a, c) in &levels {
            Interval::new(c.lo, c.hi)
                .map_err(|e| FitError::Invalid(format!("cut at alpha {a}: {e}")))?;
        }
        Ok(MembershipCurve { levels })
    }

    pub fn levels(&self) -> &[(f64, Interval)] {
        &self.levels
    }

    pub fn support(&self) -> Interval {
        self.levels[0].1
    }

    pub fn core(&self) -> Interval {
        self.levels[self.levels.len() - 1].1
    }

    /// Piecewise-linear reconstruction through the sampled cut endpoints.
    pub fn to_piecewise(&self) -> PiecewiseMembership {
        let mut points: Vec<(f64, f64)> = self.levels.iter().map(|(a, c)| (c.lo, *a)).collect();
        points.extend(self.levels.iter().rev().map(|(a, c)| (c.hi, *a)));
        PiecewiseMembership::new(points).expect("nested cuts give monotone knots")
    }

    /// Membership of `z` under the piecewise-linear reconstruction.
    pub fn membership(&self, z: f64) -> f64 {
        let s = self.support();
        if z < s.lo || z > s.hi {
            return 0.0;
        }
        let core = self.core();
        if core.contains(z) {
            return 1.0;
        }
        // highest α whose cut contains z, interpolated between neighbouring levels
        for w in self.levels.windows(2) {
            let ((a0, c0), (a1, c1)) = (w[0], w[1]);
            if c0.contains(z) && !c1.contains(z) {
                let (edge0, edge1) = if z < c1.lo { (c0.lo, c1.lo) } else { (c0.hi, c1.hi) };
                if edge1 == edge0 {
                    return a1;
                }
                let t = (z - edge0) / (edge1 - edge0);
                return a0 + t * (a1 - a0);
            }
        }
        1.0
    }
}

impl MembershipShape for MembershipCurve {
    fn area_moments(&self) -> (f64, f64) {
        self.to_piecewise().area_moments()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEstimate {
    pub curve: MembershipCurve,
    pub crisp: f64,
    /// Largest amount any cut had to be widened to restore nesting.
    pub max_repair: f64,
}

/// Ordinary least-squares intercept and slope, `(b0, b1)`.
pub fn crisp_least_squares(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    boxopt::least_squares(x, y)
}

/// Build the membership curves of the intercept and slope, returning `(b0, b1)`.
pub fn estimate_coefficient_curves(
    data: &[FuzzyObservation],
    alpha_levels: usize,
    config: &OptimizerConfig,
) -> Result<(CoefficientEstimate, CoefficientEstimate)> {
    if data.len() < 2 {
        return Err(FitError::Invalid(format!(
            "need at least 2 observations, got {}",
            data.len()
        )));
    }
    config.validate()?;
    let alphas = alpha_grid(alpha_levels)?;

    let mut b0_cuts = Vec::with_capacity(alphas.len());
    let mut b1_cuts = Vec::with_capacity(alphas.len());
    for (k, &alpha) in alphas.iter().enumerate() {
        let mut xb = Vec::with_capacity(data.len());
        let mut yb = Vec::with_capacity(data.len());
        for obs in data {
            xb.push(obs.x.alpha_cut(alpha)?);
            yb.push(obs.y.alpha_cut(alpha)?);
        }
        let solve = |objective, sense, slot: u64| -> Result<f64> {
            let problem = BoxProblem::new(xb.clone(), yb.clone(), objective, sense)?;
            let cfg = OptimizerConfig {
                rng_seed: config.rng_seed.wrapping_add(4 * k as u64 + slot),
                ..config.clone()
            };
            boxopt::solve_box(&problem, &cfg).map_err(|e| e.at_alpha(alpha))
        };
        let b0 = (
            solve(Coefficient::Intercept, Sense::Minimize, 0)?,
            solve(Coefficient::Intercept, Sense::Maximize, 1)?,
        );
        let b1 = (
            solve(Coefficient::Slope, Sense::Minimize, 2)?,
            solve(Coefficient::Slope, Sense::Maximize, 3)?,
        );
        b0_cuts.push(b0);
        b1_cuts.push(b1);
    }

    Ok((
        assemble(Coefficient::Intercept, &alphas, b0_cuts)?,
        assemble(Coefficient::Slope, &alphas, b1_cuts)?,
    ))
}

fn assemble(
    which: Coefficient,
    alphas: &[f64],
    mut bounds: Vec<(f64, f64)>,
) -> Result<CoefficientEstimate> {
    let mut max_repair: f64 = 0.0;
    let top = bounds.len() - 1;
    // α=1 first; a crossed top cut collapses to its midpoint
    if bounds[top].0 > bounds[top].1 {
        let mid = 0.5 * (bounds[top].0 + bounds[top].1);
        max_repair = max_repair.max(bounds[top].0 - bounds[top].1);
        bounds[top] = (mid, mid);
    }
    for k in (0..top).rev() {
        let (inner_lo, inner_hi) = bounds[k + 1];
        let (lo, hi) = &mut bounds[k];
        if *lo > inner_lo {
            max_repair = max_repair.max(*lo - inner_lo);
            *lo = inner_lo;
        }
        if *hi < inner_hi {
            max_repair = max_repair.max(inner_hi - *hi);
            *hi = inner_hi;
        }
    }
    if max_repair > REPAIR_WARN_THRESHOLD {
        warn!(
            "{} curve needed a nesting repair of {max_repair:e}; the box solver may have missed an optimum",
            which.name()
        );
    }

    let levels = alphas
        .iter()
        .zip(&bounds)
        .map(|(&a, &(lo, hi))| (a, Interval { lo, hi }))
        .collect();
    let curve = MembershipCurve::new(levels)?;
    let support = curve.support();
    let crisp = if support.is_degenerate() {
        support.lo
    } else {
        coa_defuzzify(&curve)?.clamp(support.lo, support.hi)
    };
    Ok(CoefficientEstimate {
        curve,
        crisp,
        max_repair,
    })
}
