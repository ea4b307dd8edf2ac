use thiserror::Error;

/// Errors raised by the fitting and forecasting pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    /// A value fell outside the domain an operation accepts (e.g. an α outside [0, 1]).
    #[error("domain error: {0}")]
    Domain(String),

    /// A trapezoid or dataset violated one of its structural invariants.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The least-squares denominator can vanish, so the coefficient is undefined.
    #[error("ill-posed problem{}: {reason}", alpha_suffix(*.alpha))]
    IllPosed { alpha: Option<f64>, reason: String },

    /// The spread constraints for one observation have no feasible point.
    #[error("infeasible constraints for observation {observation}: {reason}")]
    Infeasible { observation: usize, reason: String },

    /// A membership function has zero total area and cannot be defuzzified.
    #[error("degenerate membership: {0}")]
    DegenerateMembership(String),

    /// A fitted model is inconsistent with the data or rule base it is used with.
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

fn alpha_suffix(alpha: Option<f64>) -> String {
    match alpha {
        Some(a) => format!(" at alpha = {a}"),
        None => String::new(),
    }
}

impl FitError {
    pub(crate) fn ill_posed(reason: impl Into<String>) -> Self {
        FitError::IllPosed {
            alpha: None,
            reason: reason.into(),
        }
    }

    /// Attach an α level to an ill-posed error that does not carry one yet.
    pub fn at_alpha(self, level: f64) -> Self {
        match self {
            FitError::IllPosed { alpha: None, reason } => FitError::IllPosed {
                alpha: Some(level),
                reason,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, FitError>;
