//! Trapezoidal fuzzy numbers.
//!
//! A trapezoid `(l, m1, m2, r)` has membership 0 outside `[l, r]`, rises
//! linearly on `[l, m1]`, is 1 on the core `[m1, m2]` and falls linearly on
//! `[m2, r]`. Crisp values are the degenerate case `l = m1 = m2 = r`; a
//! degenerate leg takes value 1 at the shared point, so crisp numbers behave
//! as point indicators.
//!
//! Besides α-cuts and scalar arithmetic this module provides the two
//! integrals the regression pipeline is built on:
//!
//! - [`coa_defuzzify`], the center of area of any [`MembershipShape`];
//! - [`discrepancy`], the L1 distance `∫ |μ_f − μ_g|` between two trapezoids,
//!   integrated exactly segment by segment.

use std::fmt;
use std::ops::Add;

use crate::error::{FitError, Result};

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(FitError::Invalid(format!(
                "interval bounds must be finite, got [{lo}, {hi}]"
            )));
        }
        if lo > hi {
            return Err(FitError::Invalid(format!(
                "interval lower bound {lo} exceeds upper bound {hi}"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "[{:.p$}, {:.p$}]", self.lo, self.hi),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

/// A trapezoidal fuzzy number `(l, m1, m2, r)` with `l ≤ m1 ≤ m2 ≤ r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidalFuzzyNumber {
    pub l: f64,
    pub m1: f64,
    pub m2: f64,
    pub r: f64,
}

/// Which linear piece of a trapezoid's membership function applies on an open segment.
#[derive(Debug, Clone, Copy)]
enum Piece {
    Zero,
    Rising,
    Flat,
    Falling,
}

impl TrapezoidalFuzzyNumber {
    pub fn new(l: f64, m1: f64, m2: f64, r: f64) -> Result<Self> {
        if ![l, m1, m2, r].iter().all(|v| v.is_finite()) {
            return Err(FitError::Invalid(format!(
                "trapezoid components must be finite, got ({l}, {m1}, {m2}, {r})"
            )));
        }
        if !(l <= m1 && m1 <= m2 && m2 <= r) {
            return Err(FitError::Invalid(format!(
                "trapezoid ({l}, {m1}, {m2}, {r}) violates l <= m1 <= m2 <= r"
            )));
        }
        Ok(TrapezoidalFuzzyNumber { l, m1, m2, r })
    }

    pub fn crisp(v: f64) -> Self {
        TrapezoidalFuzzyNumber {
            l: v,
            m1: v,
            m2: v,
            r: v,
        }
    }

    /// Symmetric triangle centred on `center` with half-width `half`.
    pub fn triangle(center: f64, half: f64) -> Result<Self> {
        Self::new(center - half, center, center, center + half)
    }

    pub fn is_crisp(&self) -> bool {
        self.l == self.r
    }

    pub fn support(&self) -> Interval {
        Interval {
            lo: self.l,
            hi: self.r,
        }
    }

    pub fn core(&self) -> Interval {
        Interval {
            lo: self.m1,
            hi: self.m2,
        }
    }

    pub fn left_spread(&self) -> f64 {
        self.m1 - self.l
    }

    pub fn right_spread(&self) -> f64 {
        self.r - self.m2
    }

    pub fn total_spread(&self) -> f64 {
        self.r - self.l
    }

    pub fn modal_midpoint(&self) -> f64 {
        0.5 * (self.m1 + self.m2)
    }

    /// The α-cut `[l + α(m1 − l), r − α(r − m2)]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(FitError::Domain(format!("alpha {alpha} outside [0, 1]")));
        }
        // Clamping keeps the cut inside the core when rounding would cross it.
        let lo = (self.l + alpha * (self.m1 - self.l)).min(self.m1);
        let hi = (self.r - alpha * (self.r - self.m2)).max(self.m2);
        Ok(Interval { lo, hi })
    }

    pub fn membership(&self, y: f64) -> f64 {
        if y < self.l || y > self.r {
            0.0
        } else if y < self.m1 {
            (y - self.l) / (self.m1 - self.l)
        } else if y > self.m2 {
            (self.r - y) / (self.r - self.m2)
        } else {
            1.0
        }
    }

    /// `a·self + b`, reversing endpoints when `a` is negative.
    pub fn affine_image(&self, a: f64, b: f64) -> Self {
        let map = |v: f64| a * v + b;
        if a >= 0.0 {
            TrapezoidalFuzzyNumber {
                l: map(self.l),
                m1: map(self.m1),
                m2: map(self.m2),
                r: map(self.r),
            }
        } else {
            TrapezoidalFuzzyNumber {
                l: map(self.r),
                m1: map(self.m2),
                m2: map(self.m1),
                r: map(self.l),
            }
        }
    }

    fn piece_at(&self, t: f64) -> Piece {
        if t < self.l || t > self.r {
            Piece::Zero
        } else if t < self.m1 {
            Piece::Rising
        } else if t > self.m2 {
            Piece::Falling
        } else {
            Piece::Flat
        }
    }

    fn eval_piece(&self, piece: Piece, t: f64) -> f64 {
        match piece {
            Piece::Zero => 0.0,
            Piece::Flat => 1.0,
            Piece::Rising => (t - self.l) / (self.m1 - self.l),
            Piece::Falling => (self.r - t) / (self.r - self.m2),
        }
    }
}

impl Add for TrapezoidalFuzzyNumber {
    type Output = TrapezoidalFuzzyNumber;

    fn add(self, rhs: Self) -> Self {
        TrapezoidalFuzzyNumber {
            l: self.l + rhs.l,
            m1: self.m1 + rhs.m1,
            m2: self.m2 + rhs.m2,
            r: self.r + rhs.r,
        }
    }
}

impl fmt::Display for TrapezoidalFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, m1, m2, r) = (self.l, self.m1, self.m2, self.r);
        match f.precision() {
            Some(p) => write!(f, "({l:.p$}, {m1:.p$}, {m2:.p$}, {r:.p$})"),
            None => write!(f, "({l}, {m1}, {m2}, {r})"),
        }
    }
}

/// A membership function whose area and first moment can be computed.
pub trait MembershipShape {
    /// Returns `(∫ μ(z) dz, ∫ z μ(z) dz)`.
    fn area_moments(&self) -> (f64, f64);
}

impl MembershipShape for TrapezoidalFuzzyNumber {
    fn area_moments(&self) -> (f64, f64) {
        let (l, m1, m2, r) = (self.l, self.m1, self.m2, self.r);
        let area = 0.5 * (m1 - l) + (m2 - m1) + 0.5 * (r - m2);
        let moment = (m1 - l) * (l + 2.0 * m1) / 6.0
            + (m2 - m1) * (m1 + m2) / 2.0
            + (r - m2) * (2.0 * m2 + r) / 6.0;
        (area, moment)
    }
}

/// A piecewise-linear membership function through `(z, μ)` knots.
///
/// Knots must have nondecreasing `z`; repeated `z` values encode vertical jumps.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseMembership {
    points: Vec<(f64, f64)>,
}

impl PiecewiseMembership {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(FitError::Invalid("piecewise membership needs knots".into()));
        }
        if points.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(FitError::Invalid(
                "piecewise membership knots must have nondecreasing abscissae".into(),
            ));
        }
        if points
            .iter()
            .any(|&(z, m)| !z.is_finite() || !(0.0..=1.0).contains(&m))
        {
            return Err(FitError::Invalid(
                "piecewise membership knots must be finite with values in [0, 1]".into(),
            ));
        }
        Ok(PiecewiseMembership { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Smallest and largest abscissa with positive membership on an adjacent segment.
    pub fn support(&self) -> Interval {
        let first = self.points.first().map(|p| p.0).unwrap_or(0.0);
        let last = self.points.last().map(|p| p.0).unwrap_or(0.0);
        Interval {
            lo: first,
            hi: last,
        }
    }
}

impl MembershipShape for PiecewiseMembership {
    fn area_moments(&self) -> (f64, f64) {
        // Exact for the linear interpolant on each segment.
        self.points
            .windows(2)
            .fold((0.0, 0.0), |(area, moment), w| {
                let ((z0, m0), (z1, m1)) = (w[0], w[1]);
                let dz = z1 - z0;
                (
                    area + 0.5 * dz * (m0 + m1),
                    moment + dz * (z0 * (2.0 * m0 + m1) + z1 * (m0 + 2.0 * m1)) / 6.0,
                )
            })
    }
}

/// Center of area `∫ z μ(z) dz / ∫ μ(z) dz`.
pub fn coa_defuzzify<S: MembershipShape + ?Sized>(shape: &S) -> Result<f64> {
    let (area, moment) = shape.area_moments();
    if !(area > 0.0) || !area.is_finite() {
        return Err(FitError::DegenerateMembership(format!(
            "membership has total area {area}"
        )));
    }
    Ok(moment / area)
}

/// Integral of `|μ_observed − μ_estimated|` over the union of both supports.
///
/// Both memberships are piecewise linear, so the integrand is linear between
/// consecutive knots; a sign change inside a segment splits it into two
/// triangles.
pub fn discrepancy(observed: &TrapezoidalFuzzyNumber, estimated: &TrapezoidalFuzzyNumber) -> f64 {
    let mut knots = [
        observed.l,
        observed.m1,
        observed.m2,
        observed.r,
        estimated.l,
        estimated.m1,
        estimated.m2,
        estimated.r,
    ];
    knots.sort_by(f64::total_cmp);

    let mut total = 0.0;
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let mid = 0.5 * (a + b);
        let (po, pe) = (observed.piece_at(mid), estimated.piece_at(mid));
        let da = observed.eval_piece(po, a) - estimated.eval_piece(pe, a);
        let db = observed.eval_piece(po, b) - estimated.eval_piece(pe, b);
        let width = b - a;
        total += if da * db >= 0.0 {
            0.5 * width * (da.abs() + db.abs())
        } else {
            0.5 * width * (da * da + db * db) / (da.abs() + db.abs())
        };
    }
    total
}
