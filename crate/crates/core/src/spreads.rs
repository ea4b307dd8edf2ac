//! Fuzzy error terms.
//!
//! With crisp coefficients fixed, each observation gets its own error term
//! `(−l, 0, 0, r)` chosen to minimize the discrepancy between the observed
//! response and `b0 + b1·x̃ + (−l, 0, 0, r)`, subject to
//!
//! - the estimated total spread equals the observed total spread, and
//! - the estimated left/right spreads are at least `l_min` / `r_min`.
//!
//! The spread equality pins `l + r`, so each observation reduces to a
//! one-dimensional search over `l`. Observations do not interact, so the
//! joint program splits into independent problems.
//!
//! [`fit_uniform_baseline`] is the two-stage comparison: one error term shared
//! by every observation, with no spread constraint.

use crate::boxopt::OptimizerConfig;
use crate::coeffs::{estimate_coefficient_curves, FuzzyObservation, MembershipCurve};
use crate::error::{FitError, Result};
use crate::fuznum::{discrepancy, TrapezoidalFuzzyNumber};

/// Tolerance for treating a slightly negative feasible range as a single point.
const FEASIBILITY_SLACK: f64 = 1e-12;
const COARSE_SCAN_POINTS: usize = 50;
const DENSE_SCAN_POINTS: usize = 1000;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// The trapezoid `(−left, 0, 0, right)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTerm {
    pub left: f64,
    pub right: f64,
}

impl ErrorTerm {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !(left >= 0.0 && right >= 0.0) || !left.is_finite() || !right.is_finite() {
            return Err(FitError::Invalid(format!(
                "error term spreads must be finite and nonnegative, got ({left}, {right})"
            )));
        }
        Ok(ErrorTerm { left, right })
    }

    pub fn zero() -> Self {
        ErrorTerm {
            left: 0.0,
            right: 0.0,
        }
    }

    pub fn trapezoid(&self) -> TrapezoidalFuzzyNumber {
        TrapezoidalFuzzyNumber {
            l: -self.left,
            m1: 0.0,
            m2: 0.0,
            r: self.right,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadConfig {
    pub l_min: f64,
    pub r_min: f64,
    pub search_tol: f64,
}

impl SpreadConfig {
    pub const DEFAULT_SEARCH_TOL: f64 = 1e-8;

    pub fn new(l_min: f64, r_min: f64) -> Result<Self> {
        if !(l_min >= 0.0 && r_min >= 0.0) {
            return Err(FitError::Invalid(format!(
                "spread lower bounds must be nonnegative, got ({l_min}, {r_min})"
            )));
        }
        Ok(SpreadConfig {
            l_min,
            r_min,
            search_tol: Self::DEFAULT_SEARCH_TOL,
        })
    }

    /// Lower bounds taken from the smallest observed left and right spreads.
    pub fn from_data(data: &[FuzzyObservation]) -> Result<Self> {
        let (l_min, r_min) = derive_min_spreads(data)?;
        Self::new(l_min, r_min)
    }
}

/// Estimated response `b0 + b1·x̃ + E`.
pub fn estimated_response(
    observation: &FuzzyObservation,
    b0_c: f64,
    b1_c: f64,
    term: &ErrorTerm,
) -> TrapezoidalFuzzyNumber {
    observation.x.affine_image(b1_c, b0_c) + term.trapezoid()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub b0_c: f64,
    pub b1_c: f64,
    pub b0_curve: MembershipCurve,
    pub b1_curve: MembershipCurve,
    pub error_terms: Vec<ErrorTerm>,
    pub per_obs_discrepancy: Vec<f64>,
    pub total_discrepancy: f64,
    pub spread_config: SpreadConfig,
}

impl FittedModel {
    pub fn len(&self) -> usize {
        self.error_terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.error_terms.is_empty()
    }

    /// Crisp part of the estimate, `b0 + b1·x`.
    pub fn crisp_estimate(&self, x: f64) -> f64 {
        self.b0_c + self.b1_c * x
    }
}

/// Smallest left and right spreads among the observed responses.
pub fn derive_min_spreads(data: &[FuzzyObservation]) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Err(FitError::Invalid("need at least 1 observation".into()));
    }
    let l_min = data
        .iter()
        .map(|o| o.y.left_spread())
        .fold(f64::INFINITY, f64::min);
    let r_min = data
        .iter()
        .map(|o| o.y.right_spread())
        .fold(f64::INFINITY, f64::min);
    Ok((l_min, r_min))
}

/// Feasible range of the left spread and the pinned sum `l + r`.
fn feasible_left_range(
    observation: &FuzzyObservation,
    b0_c: f64,
    b1_c: f64,
    config: &SpreadConfig,
) -> std::result::Result<(f64, f64, f64), String> {
    let base = observation.x.affine_image(b1_c, b0_c);
    let sum = observation.y.total_spread() - base.total_spread();
    if sum < -FEASIBILITY_SLACK {
        return Err(format!(
            "propagated spread {} already exceeds observed spread {}",
            base.total_spread(),
            observation.y.total_spread()
        ));
    }
    let sum = sum.max(0.0);
    let lo = (config.l_min - base.left_spread()).max(0.0);
    let hi = sum - (config.r_min - base.right_spread()).max(0.0);
    if lo > hi + FEASIBILITY_SLACK {
        return Err(format!(
            "spread lower bounds need l >= {lo} but the spread sum {sum} allows l <= {hi}"
        ));
    }
    Ok((lo, hi.max(lo), sum))
}

/// Optimal error term for one observation and its discrepancy.
pub fn fit_error_term(
    observation: &FuzzyObservation,
    b0_c: f64,
    b1_c: f64,
    config: &SpreadConfig,
) -> Result<(ErrorTerm, f64)> {
    fit_error_term_numbered(1, observation, b0_c, b1_c, config)
}

fn fit_error_term_numbered(
    number: usize,
    observation: &FuzzyObservation,
    b0_c: f64,
    b1_c: f64,
    config: &SpreadConfig,
) -> Result<(ErrorTerm, f64)> {
    let (lo, hi, sum) = feasible_left_range(observation, b0_c, b1_c, config).map_err(|reason| {
        FitError::Infeasible {
            observation: number,
            reason,
        }
    })?;
    let term_at = |l: f64| ErrorTerm {
        left: l,
        right: (sum - l).max(0.0),
    };
    let objective = |l: f64| {
        discrepancy(
            &observation.y,
            &estimated_response(observation, b0_c, b1_c, &term_at(l)),
        )
    };
    let (l, d) = minimize_on_interval(&objective, lo, hi, config.search_tol);
    Ok((term_at(l), d))
}

/// Golden section with a scan-based guard against non-unimodal objectives.
fn minimize_on_interval(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    if !(hi > lo) {
        return (lo, f(lo));
    }
    let mut best = golden_section(f, lo, hi, tol);

    let (coarse_t, coarse_v) = scan(f, lo, hi, COARSE_SCAN_POINTS);
    if coarse_v < best.1 {
        let (dense_t, _) = scan(f, lo, hi, DENSE_SCAN_POINTS);
        let cell = (hi - lo) / DENSE_SCAN_POINTS as f64;
        let refined = golden_section(f, (dense_t - cell).max(lo), (dense_t + cell).min(hi), tol);
        for cand in [(coarse_t, coarse_v), refined] {
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    best
}

fn scan(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let step = (hi - lo) / points as f64;
    let mut best = (lo, f(lo));
    for k in 1..=points {
        let t = if k == points { hi } else { lo + k as f64 * step };
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut best = {
        let (fa, fb) = (f(a), f(b));
        if fb < fa {
            (b, fb)
        } else {
            (a, fa)
        }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for cand in [(c, fc), (d, fd)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Full pipeline: coefficient curves, COA coefficients, per-observation error terms.
pub fn fit_nonuniform(
    data: &[FuzzyObservation],
    alpha_levels: usize,
    opt_config: &OptimizerConfig,
    spread_config: &SpreadConfig,
) -> Result<FittedModel> {
    let (b0, b1) = estimate_coefficient_curves(data, alpha_levels, opt_config)?;
    let (b0_c, b1_c) = (b0.crisp, b1.crisp);

    let mut error_terms = Vec::with_capacity(data.len());
    let mut per_obs = Vec::with_capacity(data.len());
    for (i, obs) in data.iter().enumerate() {
        let (term, d) = fit_error_term_numbered(i + 1, obs, b0_c, b1_c, spread_config)?;
        error_terms.push(term);
        per_obs.push(d);
    }
    let total = per_obs.iter().sum();
    Ok(FittedModel {
        b0_c,
        b1_c,
        b0_curve: b0.curve,
        b1_curve: b1.curve,
        error_terms,
        per_obs_discrepancy: per_obs,
        total_discrepancy: total,
        spread_config: spread_config.clone(),
    })
}

/// Shared error term of the two-stage comparison and its discrepancies.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBaseline {
    pub term: ErrorTerm,
    pub per_obs_discrepancy: Vec<f64>,
    pub total_discrepancy: f64,
}

const BASELINE_GRID: usize = 40;
const BASELINE_STARTS: usize = 4;
const BASELINE_SWEEPS: usize = 200;
const BASELINE_TOL: f64 = 1e-9;

/// One error term shared by every observation, minimizing total discrepancy
/// over `[0, S]²` where `S` is the largest observed total spread.
pub fn fit_uniform_baseline(
    data: &[FuzzyObservation],
    b0_c: f64,
    b1_c: f64,
) -> Result<UniformBaseline> {
    if data.is_empty() {
        return Err(FitError::Invalid("need at least 1 observation".into()));
    }
    let total = |l: f64, r: f64| -> f64 {
        let term = ErrorTerm { left: l, right: r };
        data.iter()
            .map(|o| discrepancy(&o.y, &estimated_response(o, b0_c, b1_c, &term)))
            .sum()
    };
    let s_max = data
        .iter()
        .map(|o| o.y.total_spread())
        .fold(0.0, f64::max);

    let (l, r) = if s_max > 0.0 {
        let cell = s_max / BASELINE_GRID as f64;
        let at = |k: usize| if k == BASELINE_GRID { s_max } else { k as f64 * cell };
        let mut grid = Vec::with_capacity((BASELINE_GRID + 1) * (BASELINE_GRID + 1));
        for i in 0..=BASELINE_GRID {
            for j in 0..=BASELINE_GRID {
                grid.push((total(at(i), at(j)), at(i), at(j)));
            }
        }
        // stable sort keeps grid order on ties
        grid.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut best = (grid[0].0, grid[0].1, grid[0].2);
        for &(v0, l0, r0) in grid.iter().take(BASELINE_STARTS) {
            let (v, l, r) = refine_pair(&total, l0, r0, v0, cell, s_max);
            if v < best.0 {
                best = (v, l, r);
            }
        }
        (best.1, best.2)
    } else {
        (0.0, 0.0)
    };

    let term = ErrorTerm { left: l, right: r };
    let per_obs: Vec<f64> = data
        .iter()
        .map(|o| discrepancy(&o.y, &estimated_response(o, b0_c, b1_c, &term)))
        .collect();
    let total_discrepancy = per_obs.iter().sum();
    Ok(UniformBaseline {
        term,
        per_obs_discrepancy: per_obs,
        total_discrepancy,
    })
}

/// Alternating golden-section refinement of `(l, r)` inside `[0, s_max]²`.
fn refine_pair(
    total: &dyn Fn(f64, f64) -> f64,
    mut l: f64,
    mut r: f64,
    mut v: f64,
    cell: f64,
    s_max: f64,
) -> (f64, f64, f64) {
    for _ in 0..BASELINE_SWEEPS {
        let before = v;
        let fl = |t: f64| total(t, r);
        let (nl, vl) = golden_section(&fl, (l - cell).max(0.0), (l + cell).min(s_max), BASELINE_TOL);
        if vl < v {
            l = nl;
            v = vl;
        }
        let fr = |t: f64| total(l, t);
        let (nr, vr) = golden_section(&fr, (r - cell).max(0.0), (r + cell).min(s_max), BASELINE_TOL);
        if vr < v {
            r = nr;
            v = vr;
        }
        if before - v <= BASELINE_TOL {
            break;
        }
    }
    (v, l, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tfn(l: f64, m1: f64, m2: f64, r: f64) -> TrapezoidalFuzzyNumber {
        TrapezoidalFuzzyNumber::new(l, m1, m2, r).unwrap()
    }

    fn table1() -> Vec<FuzzyObservation> {
        [
            (2.0, 2.5, 3.0),
            (5.0, 5.5, 6.0),
            (6.0, 6.5, 7.0),
            (9.0, 9.5, 10.0),
            (9.0, 11.5, 14.0),
        ]
        .iter()
        .enumerate()
        .map(|(i, &(l, m, r))| FuzzyObservation::crisp_x((i + 1) as f64, tfn(l, m, m, r)))
        .collect()
    }

    /// Brute-force scan of the discrepancy over the feasible left spreads.
    fn scan_oracle(obs: &FuzzyObservation, b0: f64, b1: f64, lo: f64, hi: f64, sum: f64) -> f64 {
        let steps = ((hi - lo) / 1e-3).round() as usize;
        (0..=steps)
            .map(|k| {
                let l = (lo + k as f64 * 1e-3).min(hi);
                let t = ErrorTerm {
                    left: l,
                    right: sum - l,
                };
                discrepancy(&obs.y, &estimated_response(obs, b0, b1, &t))
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn min_spreads_examples() {
        assert_eq!(derive_min_spreads(&table1()).unwrap(), (0.5, 0.5));
        let single = [FuzzyObservation::crisp_x(1.0, TrapezoidalFuzzyNumber::crisp(2.0))];
        assert_eq!(derive_min_spreads(&single).unwrap(), (0.0, 0.0));
        let two = [
            FuzzyObservation::crisp_x(1.0, tfn(0.0, 1.0, 1.0, 3.0)),
            FuzzyObservation::crisp_x(2.0, tfn(0.0, 2.0, 2.0, 2.5)),
        ];
        assert_eq!(derive_min_spreads(&two).unwrap().0, 1.0);
        assert!(derive_min_spreads(&[]).is_err());
    }

    #[test]
    fn unit_spread_pins_the_error_term() {
        let cfg = SpreadConfig::new(0.5, 0.5).unwrap();
        for obs in &table1()[..4] {
            let (t, _) = fit_error_term(obs, 0.5, 2.2, &cfg).unwrap();
            assert_eq!(t, ErrorTerm::new(0.5, 0.5).unwrap());
        }
    }

    #[test]
    fn wide_observation_matches_scan() {
        let cfg = SpreadConfig::new(0.5, 0.5).unwrap();
        let obs = table1()[4];
        for (b0, b1) in [(0.5, 2.2), (0.6, 2.4), (-0.3, 2.5)] {
            let (t, d) = fit_error_term(&obs, b0, b1, &cfg).unwrap();
            assert!((t.left + t.right - 5.0).abs() < 1e-12);
            assert!(t.left >= 0.5 - 1e-12 && t.left <= 4.5 + 1e-12);
            let oracle = scan_oracle(&obs, b0, b1, 0.5, 4.5, 5.0);
            assert!(d <= oracle + 1e-3, "({b0}, {b1}): {d} vs {oracle}");
            assert!((d - oracle).abs() < 1e-3);
        }
    }

    #[test]
    fn exact_match_has_zero_discrepancy() {
        let obs = FuzzyObservation::crisp_x(2.0, tfn(4.0, 5.0, 5.0, 6.0));
        let (t, d) = fit_error_term(&obs, 1.0, 2.0, &SpreadConfig::new(0.2, 0.2).unwrap()).unwrap();
        assert!((t.left - 1.0).abs() < 1e-6 && (t.right - 1.0).abs() < 1e-6);
        assert!(d < 1e-6);
    }

    #[test]
    fn propagated_spread_too_wide_is_infeasible() {
        let obs = FuzzyObservation::new(tfn(0.0, 1.0, 1.0, 2.0), tfn(1.0, 1.5, 1.5, 2.0));
        let err = fit_error_term(&obs, 0.0, 2.0, &SpreadConfig::new(0.0, 0.0).unwrap());
        assert!(matches!(err, Err(FitError::Infeasible { observation: 1, .. })));
    }

    #[test]
    fn lower_bounds_exceeding_slack_are_infeasible() {
        let obs = FuzzyObservation::crisp_x(1.0, tfn(0.0, 0.5, 0.5, 1.0));
        let err = fit_error_term(&obs, 0.0, 0.5, &SpreadConfig::new(0.6, 0.6).unwrap());
        assert!(matches!(err, Err(FitError::Infeasible { .. })));
    }

    #[test]
    fn negative_slope_uses_reversed_spreads() {
        // x left spread 0.1 and right spread 0.3 swap under b1 = -1
        let obs = FuzzyObservation::new(tfn(0.9, 1.0, 1.0, 1.3), tfn(-2.0, -1.0, -1.0, 0.0));
        let cfg = SpreadConfig::new(0.5, 0.5).unwrap();
        let (t, _) = fit_error_term(&obs, 0.0, -1.0, &cfg).unwrap();
        let est = estimated_response(&obs, 0.0, -1.0, &t);
        assert!((est.total_spread() - 2.0).abs() < 1e-9);
        assert!(est.left_spread() >= 0.5 - 1e-9 && est.right_spread() >= 0.5 - 1e-9);
    }

    #[test]
    fn table1_pipeline() {
        let data = table1();
        let cfg = SpreadConfig::from_data(&data).unwrap();
        let m = fit_nonuniform(&data, 21, &OptimizerConfig::default(), &cfg).unwrap();
        for t in &m.error_terms[..4] {
            assert_eq!(*t, ErrorTerm::new(0.5, 0.5).unwrap());
        }
        let est5 = estimated_response(&data[4], m.b0_c, m.b1_c, &m.error_terms[4]);
        assert!((est5.total_spread() - 5.0).abs() < 1e-9);
        let sum: f64 = m.per_obs_discrepancy.iter().sum();
        assert_eq!(sum, m.total_discrepancy);
    }

    #[test]
    fn crisp_line_fits_exactly() {
        let data: Vec<_> = [1.0, 2.0, 3.5]
            .iter()
            .map(|&x| FuzzyObservation::crisp_x(x, TrapezoidalFuzzyNumber::crisp(1.0 + 3.0 * x)))
            .collect();
        let cfg = SpreadConfig::from_data(&data).unwrap();
        let m = fit_nonuniform(&data, 5, &OptimizerConfig::default(), &cfg).unwrap();
        assert!(m.error_terms.iter().all(|t| *t == ErrorTerm::zero()));
        assert!(m.total_discrepancy < 1e-12);
    }

    #[test]
    fn baseline_exact_for_shared_spread_on_a_line() {
        let data: Vec<_> = [0.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|&x| {
                let c = 2.0 - 0.5 * x;
                FuzzyObservation::crisp_x(x, tfn(c - 0.4, c, c, c + 0.7))
            })
            .collect();
        let b = fit_uniform_baseline(&data, 2.0, -0.5).unwrap();
        assert!(b.total_discrepancy < 1e-6, "{}", b.total_discrepancy);
        assert!((b.term.left - 0.4).abs() < 1e-5 && (b.term.right - 0.7).abs() < 1e-5);
    }

    #[test]
    fn baseline_not_beaten_by_grid() {
        let data = table1();
        let b = fit_uniform_baseline(&data, 0.5, 2.2).unwrap();
        let mut grid_best = f64::INFINITY;
        for i in 0..=100 {
            for j in 0..=100 {
                let t = ErrorTerm {
                    left: 0.05 * i as f64,
                    right: 0.05 * j as f64,
                };
                let v: f64 = data
                    .iter()
                    .map(|o| discrepancy(&o.y, &estimated_response(o, 0.5, 2.2, &t)))
                    .sum();
                grid_best = grid_best.min(v);
            }
        }
        assert!(b.total_discrepancy <= grid_best + 1e-9);
    }
}
