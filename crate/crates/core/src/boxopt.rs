//! Least-squares coefficient extremes over α-cut boxes.
//!
//! For a fixed vector of explanatory values both the slope and the intercept
//! estimators are affine in the responses, so the best responses sit on the
//! bounds picked by the sign of each response's coefficient. What remains is
//! a box-constrained search over the explanatory values only, done by
//! multistart projected coordinate search. When every explanatory interval is
//! a point the analytic step alone gives the exact optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FitError, Result};
use crate::fuznum::Interval;

/// Which least-squares estimator a box problem optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficient {
    /// `b0 = ȳ − b1·x̄`
    Intercept,
    /// `b1 = Σ(xᵢ−x̄)(yᵢ−ȳ) / Σ(xᵢ−x̄)²`
    Slope,
}

impl Coefficient {
    pub fn name(&self) -> &'static str {
        match self {
            Coefficient::Intercept => "b0",
            Coefficient::Slope => "b1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn factor(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxProblem {
    pub x_bounds: Vec<Interval>,
    pub y_bounds: Vec<Interval>,
    pub objective: Coefficient,
    pub sense: Sense,
}

impl BoxProblem {
    pub fn new(
        x_bounds: Vec<Interval>,
        y_bounds: Vec<Interval>,
        objective: Coefficient,
        sense: Sense,
    ) -> Result<Self> {
        if x_bounds.len() != y_bounds.len() {
            return Err(FitError::Invalid(format!(
                "box has {} x bounds but {} y bounds",
                x_bounds.len(),
                y_bounds.len()
            )));
        }
        if x_bounds.len() < 2 {
            return Err(FitError::Invalid(format!(
                "need at least 2 observations, got {}",
                x_bounds.len()
            )));
        }
        Ok(BoxProblem {
            x_bounds,
            y_bounds,
            objective,
            sense,
        })
    }

    pub fn len(&self) -> usize {
        self.x_bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_bounds.is_empty()
    }

    /// Fails when every explanatory value can coincide, i.e. `Σ(xᵢ−x̄)²` reaches zero.
    fn check_well_posed(&self) -> Result<()> {
        let max_lo = self
            .x_bounds
            .iter()
            .map(|b| b.lo)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_hi = self
            .x_bounds
            .iter()
            .map(|b| b.hi)
            .fold(f64::INFINITY, f64::min);
        if max_lo <= min_hi {
            return Err(FitError::ill_posed(format!(
                "all explanatory values can equal {max_lo} inside the box, \
                 so the denominator sum (x - mean)^2 vanishes"
            )));
        }
        Ok(())
    }

    /// Optimal objective for fixed `x`, with the responses chosen analytically.
    fn reduced_objective(&self, x: &[f64], y_out: &mut [f64]) -> f64 {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let sxx: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
        let mut value = 0.0;
        for (i, (&xi, yb)) in x.iter().zip(&self.y_bounds).enumerate() {
            let c = coefficient_of_y(self.objective, xi, mean, sxx, n);
            let upward = c * self.sense.factor() < 0.0;
            let yi = if c == 0.0 {
                yb.midpoint()
            } else if upward {
                yb.hi
            } else {
                yb.lo
            };
            y_out[i] = yi;
            value += c * yi;
        }
        value
    }
}

#[inline]
fn coefficient_of_y(objective: Coefficient, xi: f64, mean: f64, sxx: f64, n: f64) -> f64 {
    let slope = (xi - mean) / sxx;
    match objective {
        Coefficient::Slope => slope,
        Coefficient::Intercept => 1.0 / n - mean * slope,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub multistart_count: usize,
    pub max_iterations: usize,
    pub convergence_tol: f64,
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            multistart_count: 32,
            max_iterations: 500,
            convergence_tol: 1e-9,
            rng_seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.multistart_count == 0 || self.max_iterations == 0 {
            return Err(FitError::Invalid(
                "multistart_count and max_iterations must be positive".into(),
            ));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(FitError::Invalid(format!(
                "convergence_tol must be positive, got {}",
                self.convergence_tol
            )));
        }
        Ok(())
    }
}

/// Optimal value together with the point that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Least-squares slope and intercept of crisp data.
pub fn least_squares(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(FitError::Invalid(format!(
            "x has {} values but y has {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(FitError::Invalid(format!(
            "need at least 2 observations, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return Err(FitError::ill_posed("all explanatory values are equal"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b1 = sxy / sxx;
    Ok((my - b1 * mx, b1))
}

/// Sign of `∂objective/∂yᵢ` for each observation at the given explanatory values.
pub fn affine_reduction_signs(x: &[f64], objective: Coefficient) -> Result<Vec<Sign>> {
    if x.len() < 2 {
        return Err(FitError::Invalid(format!(
            "need at least 2 observations, got {}",
            x.len()
        )));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    if !(sxx > 0.0) {
        return Err(FitError::ill_posed("all explanatory values are equal"));
    }
    Ok(x.iter()
        .map(|&xi| Sign::of(coefficient_of_y(objective, xi, mean, sxx, n)))
        .collect())
}

pub fn solve_box(problem: &BoxProblem, config: &OptimizerConfig) -> Result<f64> {
    solve_box_detailed(problem, config).map(|s| s.value)
}

pub fn solve_box_detailed(problem: &BoxProblem, config: &OptimizerConfig) -> Result<BoxSolution> {
    config.validate()?;
    problem.check_well_posed()?;

    let n = problem.len();
    let free: Vec<usize> = (0..n)
        .filter(|&i| !problem.x_bounds[i].is_degenerate())
        .collect();
    let base: Vec<f64> = problem.x_bounds.iter().map(|b| b.lo).collect();
    let mut y = vec![0.0; n];

    if free.is_empty() {
        let value = problem.reduced_objective(&base, &mut y);
        return Ok(BoxSolution { value, x: base, y });
    }

    let search = CoordinateSearch {
        problem,
        free: &free,
        config,
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starting_points(problem, &free, &base, config) {
        let (score, x) = search.run(start);
        // strict improvement keeps the earliest candidate on ties
        if best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, x));
        }
    }
    let (_, x) = best.expect("at least one start");
    let value = problem.reduced_objective(&x, &mut y);
    Ok(BoxSolution { value, x, y })
}

fn starting_points(
    problem: &BoxProblem,
    free: &[usize],
    base: &[f64],
    config: &OptimizerConfig,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut starts = Vec::new();
    let k = free.len();
    let vertex = |mask: &dyn Fn(usize) -> bool| {
        let mut x = base.to_vec();
        for (bit, &i) in free.iter().enumerate() {
            let b = problem.x_bounds[i];
            x[i] = if mask(bit) { b.hi } else { b.lo };
        }
        x
    };
    if k <= 10 {
        for m in 0..(1usize << k) {
            starts.push(vertex(&|bit| m >> bit & 1 == 1));
        }
    } else {
        for _ in 0..config.multistart_count {
            let bits: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
            starts.push(vertex(&|bit| bits[bit]));
        }
    }
    for _ in 0..config.multistart_count {
        let mut x = base.to_vec();
        for &i in free {
            let b = problem.x_bounds[i];
            x[i] = b.lo + rng.gen::<f64>() * b.width();
        }
        starts.push(x);
    }
    starts
}

struct CoordinateSearch<'a> {
    problem: &'a BoxProblem,
    free: &'a [usize],
    config: &'a OptimizerConfig,
}

const LINE_SCAN_POINTS: usize = 8;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

impl CoordinateSearch<'_> {
    /// Sense-adjusted objective, always minimized.
    fn score(&self, x: &[f64], scratch: &mut [f64]) -> f64 {
        let v = self.problem.reduced_objective(x, scratch) * self.problem.sense.factor();
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    fn run(&self, mut x: Vec<f64>) -> (f64, Vec<f64>) {
        let mut scratch = vec![0.0; x.len()];
        let mut current = self.score(&x, &mut scratch);
        for _ in 0..self.config.max_iterations {
            let before = current;
            for &i in self.free {
                current = self.line_refine(&mut x, i, current, &mut scratch);
            }
            if before - current <= self.config.convergence_tol * (1.0 + current.abs()) {
                break;
            }
        }
        (current, x)
    }

    /// Minimize along coordinate `i`: coarse scan, then golden section around the best point.
    fn line_refine(&self, x: &mut [f64], i: usize, current: f64, scratch: &mut [f64]) -> f64 {
        let bound = self.problem.x_bounds[i];
        let mut eval = |x: &mut [f64], t: f64| {
            x[i] = t;
            self.score(x, scratch)
        };

        let step = bound.width() / LINE_SCAN_POINTS as f64;
        let mut best_t = x[i];
        let mut best_v = current;
        for k in 0..=LINE_SCAN_POINTS {
            let t = if k == LINE_SCAN_POINTS {
                bound.hi
            } else {
                bound.lo + k as f64 * step
            };
            let v = eval(x, t);
            if v < best_v {
                best_v = v;
                best_t = t;
            }
        }

        let mut a = (best_t - step).max(bound.lo);
        let mut b = (best_t + step).min(bound.hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = eval(x, c);
        let mut fd = eval(x, d);
        while b - a > self.config.convergence_tol {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = eval(x, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = eval(x, d);
            }
        }
        for (t, v) in [(c, fc), (d, fd)] {
            if v < best_v {
                best_v = v;
                best_t = t;
            }
        }
        x[i] = best_t;
        best_v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1_y_bounds(alpha: f64) -> Vec<Interval> {
        let ys = [
            (2.0, 2.5, 3.0),
            (5.0, 5.5, 6.0),
            (6.0, 6.5, 7.0),
            (9.0, 9.5, 10.0),
            (9.0, 11.5, 14.0),
        ];
        ys.iter()
            .map(|&(l, m, r)| Interval {
                lo: l + alpha * (m - l),
                hi: r - alpha * (r - m),
            })
            .collect()
    }

    fn crisp_x(xs: &[f64]) -> Vec<Interval> {
        xs.iter().map(|&v| Interval::point(v)).collect()
    }

    /// Exhaustive enumeration of response vertices for crisp x.
    fn vertex_oracle(x: &[f64], yb: &[Interval], obj: Coefficient, sense: Sense) -> f64 {
        let n = x.len();
        let mut best = match sense {
            Sense::Minimize => f64::INFINITY,
            Sense::Maximize => f64::NEG_INFINITY,
        };
        for m in 0..(1usize << n) {
            let y: Vec<f64> = (0..n)
                .map(|i| if m >> i & 1 == 1 { yb[i].hi } else { yb[i].lo })
                .collect();
            let (b0, b1) = least_squares(x, &y).unwrap();
            let v = match obj {
                Coefficient::Intercept => b0,
                Coefficient::Slope => b1,
            };
            best = match sense {
                Sense::Minimize => best.min(v),
                Sense::Maximize => best.max(v),
            };
        }
        best
    }

    #[test]
    fn table1_slope_extremes_at_alpha_zero() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let cfg = OptimizerConfig::default();
        for (sense, expected) in [(Sense::Minimize, 1.5), (Sense::Maximize, 2.9)] {
            let oracle = vertex_oracle(&x, &table1_y_bounds(0.0), Coefficient::Slope, sense);
            assert!((oracle - expected).abs() < 1e-12);
            let p = BoxProblem::new(crisp_x(&x), table1_y_bounds(0.0), Coefficient::Slope, sense)
                .unwrap();
            let v = solve_box(&p, &cfg).unwrap();
            assert!((v - expected).abs() < 1e-12, "{sense:?}: {v}");
        }
    }

    #[test]
    fn table1_slope_at_modal_values() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let p = BoxProblem::new(
            crisp_x(&x),
            table1_y_bounds(1.0),
            Coefficient::Slope,
            Sense::Minimize,
        )
        .unwrap();
        let v = solve_box(&p, &OptimizerConfig::default()).unwrap();
        assert!((v - 2.2).abs() < 1e-12);
    }

    #[test]
    fn signs_examples() {
        use Sign::*;
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(
            affine_reduction_signs(&x, Coefficient::Slope).unwrap(),
            vec![Negative, Negative, Zero, Positive, Positive]
        );
        assert_eq!(
            affine_reduction_signs(&x, Coefficient::Intercept).unwrap(),
            vec![Positive, Positive, Positive, Negative, Negative]
        );
        assert_eq!(
            affine_reduction_signs(&[0.0, 1.0], Coefficient::Slope).unwrap(),
            vec![Negative, Positive]
        );
        assert!(matches!(
            affine_reduction_signs(&[2.0, 2.0, 2.0], Coefficient::Slope),
            Err(FitError::IllPosed { .. })
        ));
    }

    #[test]
    fn least_squares_examples() {
        let (b0, b1) =
            least_squares(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.5, 5.5, 6.5, 9.5, 11.5]).unwrap();
        assert!((b1 - 2.2).abs() < 1e-12);
        assert!((b0 - 0.5).abs() < 1e-12);
        assert_eq!(least_squares(&[0.0, 1.0], &[0.0, 1.0]).unwrap(), (0.0, 1.0));
        let (b0, b1) = least_squares(&[1.0, 2.0, 3.0], &[4.2, 4.2, 4.2]).unwrap();
        assert!(b1.abs() < 1e-15 && (b0 - 4.2).abs() < 1e-12);
        assert!(least_squares(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn overlapping_x_boxes_are_ill_posed() {
        let p = BoxProblem::new(
            vec![Interval { lo: 0.0, hi: 1.0 }, Interval { lo: 0.5, hi: 2.0 }],
            vec![Interval::point(0.0), Interval::point(1.0)],
            Coefficient::Slope,
            Sense::Minimize,
        )
        .unwrap();
        assert!(matches!(
            solve_box(&p, &OptimizerConfig::default()),
            Err(FitError::IllPosed { alpha: None, .. })
        ));
    }

    #[test]
    fn rejects_short_or_mismatched_boxes() {
        let one = vec![Interval::point(1.0)];
        assert!(BoxProblem::new(one.clone(), one, Coefficient::Slope, Sense::Minimize).is_err());
        let two = vec![Interval::point(1.0), Interval::point(2.0)];
        let three = vec![Interval::point(0.0); 3];
        assert!(BoxProblem::new(two, three, Coefficient::Slope, Sense::Minimize).is_err());
    }

    #[test]
    fn fuzzy_x_solution_is_feasible_and_consistent() {
        let p = BoxProblem::new(
            vec![
                Interval { lo: 0.8, hi: 1.2 },
                Interval { lo: 1.9, hi: 2.3 },
                Interval { lo: 3.0, hi: 3.5 },
            ],
            vec![
                Interval { lo: 1.0, hi: 1.5 },
                Interval { lo: 2.0, hi: 2.2 },
                Interval { lo: 2.5, hi: 3.4 },
            ],
            Coefficient::Slope,
            Sense::Maximize,
        )
        .unwrap();
        let s = solve_box_detailed(&p, &OptimizerConfig::default()).unwrap();
        for (xi, b) in s.x.iter().zip(&p.x_bounds) {
            assert!(b.contains(*xi));
        }
        for (yi, b) in s.y.iter().zip(&p.y_bounds) {
            assert!(b.contains(*yi));
        }
        let (_, b1) = least_squares(&s.x, &s.y).unwrap();
        assert!((b1 - s.value).abs() < 1e-12);
    }
}
