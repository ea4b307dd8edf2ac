//! Fuzzy linear regression with crisp coefficients and non-uniform fuzzy
//! error spreads.
//!
//! Fitting runs in three phases:
//!
//! 1. [`coeffs::estimate_coefficient_curves`] builds the membership curves of
//!    the least-squares intercept and slope by optimizing both estimators over
//!    the α-cuts of the data ([`boxopt`]).
//! 2. The curves are defuzzified by center of area into crisp coefficients.
//! 3. [`spreads::fit_nonuniform`] picks one error term per observation so the
//!    estimated response has the same total spread as the observed one while
//!    minimizing the membership discrepancy between the two.
//!
//! [`forecast::predict`] extends a fitted model to new inputs with
//! rule-based inference over the fitted error terms.
//!
//! ```
//! use nufreg::{fit_nonuniform, FuzzyObservation, OptimizerConfig, SpreadConfig,
//!              TrapezoidalFuzzyNumber};
//!
//! let data: Vec<FuzzyObservation> = [(1.0, 2.5), (2.0, 5.5), (3.0, 6.5)]
//!     .iter()
//!     .map(|&(x, y)| FuzzyObservation::crisp_x(x, TrapezoidalFuzzyNumber::triangle(y, 0.5).unwrap()))
//!     .collect();
//! let spreads = SpreadConfig::from_data(&data).unwrap();
//! let model = fit_nonuniform(&data, 21, &OptimizerConfig::default(), &spreads).unwrap();
//! assert!((model.b1_c - 2.0).abs() < 1e-9);
//! ```

pub mod benchmark;
pub mod boxopt;
pub mod cli;
pub mod coeffs;
pub mod error;
pub mod forecast;
pub mod fuznum;
pub mod spreads;

pub use boxopt::{solve_box, BoxProblem, Coefficient, OptimizerConfig, Sense};
pub use coeffs::{
    crisp_least_squares, estimate_coefficient_curves, CoefficientEstimate, FuzzyObservation,
    MembershipCurve,
};
pub use error::{FitError, Result};
pub use forecast::{activate, build_rule_base, predict, ForecastResult, RuleBase};
pub use fuznum::{coa_defuzzify, discrepancy, Interval, TrapezoidalFuzzyNumber};
pub use spreads::{
    derive_min_spreads, fit_error_term, fit_nonuniform, fit_uniform_baseline, ErrorTerm,
    FittedModel, SpreadConfig, UniformBaseline,
};
