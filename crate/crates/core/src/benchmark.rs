//! The five-observation benchmark dataset and its published estimation errors.
//!
//! The published figures were produced with coefficients `0.6 + 2.4x`, a
//! shared two-stage error term `(-1.2, 0, 0, 0.796)` and non-uniform error
//! terms `(-0.6, 0, 0, 0.6)`. They are kept for side-by-side reporting only;
//! nothing in the pipeline depends on them.

use crate::coeffs::FuzzyObservation;
use crate::fuznum::TrapezoidalFuzzyNumber;
use crate::spreads::ErrorTerm;

/// `(x, (y_l, y_m, y_r))` rows with triangular responses.
const ROWS: [(f64, (f64, f64, f64)); 5] = [
    (1.0, (2.0, 2.5, 3.0)),
    (2.0, (5.0, 5.5, 6.0)),
    (3.0, (6.0, 6.5, 7.0)),
    (4.0, (9.0, 9.5, 10.0)),
    (5.0, (9.0, 11.5, 14.0)),
];

pub const REFERENCE_TWO_STAGE: [f64; 5] = [0.456, 1.093, 0.789, 0.557, 1.586];
pub const REFERENCE_TWO_STAGE_TOTAL: f64 = 4.480;
pub const REFERENCE_NON_UNIFORM: [f64; 5] = [0.356, 0.836, 0.836, 0.356, 0.000];
pub const REFERENCE_NON_UNIFORM_TOTAL: f64 = 2.384;

/// Published crisp coefficients `(b0, b1)`.
pub const REFERENCE_COEFFICIENTS: (f64, f64) = (0.6, 2.4);
pub const REFERENCE_SHARED_TERM: ErrorTerm = ErrorTerm {
    left: 1.2,
    right: 0.796,
};
pub const REFERENCE_NON_UNIFORM_TERM: ErrorTerm = ErrorTerm {
    left: 0.6,
    right: 0.6,
};

/// Published values are rounded to three decimals.
pub const REFERENCE_PRECISION: f64 = 5e-4;

pub fn dataset() -> Vec<FuzzyObservation> {
    ROWS.iter()
        .map(|&(x, (l, m, r))| {
            FuzzyObservation::crisp_x(x, TrapezoidalFuzzyNumber { l, m1: m, m2: m, r })
        })
        .collect()
}

/// True when `data` is exactly the benchmark dataset.
pub fn is_benchmark(data: &[FuzzyObservation]) -> bool {
    data == dataset().as_slice()
}
