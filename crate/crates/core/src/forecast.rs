//! Forecasting responses for new explanatory values.
//!
//! Every fitted observation becomes a rule "if the estimate is ỹᵢ then the
//! error is Ẽᵢ". A new input fires rules by the membership of its crisp
//! estimate in each observed response; the fired consequents are clipped at
//! their weights and joined by max. The resulting (possibly irregular) error
//! set is turned back into a trapezoid: its support extremes become the outer
//! knots and its center of area becomes the core.

use crate::coeffs::FuzzyObservation;
use crate::error::{FitError, Result};
use crate::fuznum::{coa_defuzzify, PiecewiseMembership, TrapezoidalFuzzyNumber};
use crate::spreads::{ErrorTerm, FittedModel};

/// Number of samples used to integrate the aggregated error membership.
pub const AGGREGATE_SAMPLES: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rule {
    pub antecedent: TrapezoidalFuzzyNumber,
    pub consequent: ErrorTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    rules: Vec<Rule>,
}

impl RuleBase {
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(FitError::InvalidModel("rule base is empty".into()));
        }
        Ok(RuleBase { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastResult {
    pub crisp_core: f64,
    pub error_term: TrapezoidalFuzzyNumber,
    pub response: TrapezoidalFuzzyNumber,
    pub activations: Vec<(usize, f64)>,
}

/// One rule per observation, in observation order.
pub fn build_rule_base(model: &FittedModel, data: &[FuzzyObservation]) -> Result<RuleBase> {
    if model.error_terms.len() != data.len() {
        return Err(FitError::InvalidModel(format!(
            "model has {} error terms but {} observations were given",
            model.error_terms.len(),
            data.len()
        )));
    }
    RuleBase::new(
        data.iter()
            .zip(&model.error_terms)
            .map(|(obs, term)| Rule {
                antecedent: obs.y,
                consequent: *term,
            })
            .collect(),
    )
}

/// Nonzero rule weights for a crisp estimate.
///
/// If no antecedent contains the estimate, the two rules whose supports lie
/// closest share the activation in inverse proportion to their distance.
pub fn activate(rules: &RuleBase, crisp_estimate: f64) -> Vec<(usize, f64)> {
    let direct: Vec<(usize, f64)> = rules
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.antecedent.membership(crisp_estimate)))
        .filter(|&(_, w)| w > 0.0)
        .collect();
    if !direct.is_empty() {
        return direct;
    }

    let mut dist: Vec<(usize, f64)> = rules
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let s = r.antecedent.support();
            let d = if crisp_estimate < s.lo {
                s.lo - crisp_estimate
            } else if crisp_estimate > s.hi {
                crisp_estimate - s.hi
            } else {
                0.0
            };
            (i, d)
        })
        .collect();
    // stable: ties resolved by rule order
    dist.sort_by(|a, b| a.1.total_cmp(&b.1));
    dist.truncate(2);

    if dist.iter().any(|&(_, d)| d == 0.0) {
        let touching: Vec<usize> = dist.iter().filter(|p| p.1 == 0.0).map(|p| p.0).collect();
        let w = 1.0 / touching.len() as f64;
        let mut out: Vec<(usize, f64)> = touching.into_iter().map(|i| (i, w)).collect();
        out.sort_by_key(|p| p.0);
        return out;
    }
    let norm: f64 = dist.iter().map(|&(_, d)| 1.0 / d).sum();
    let mut out: Vec<(usize, f64)> = dist.iter().map(|&(i, d)| (i, (1.0 / d) / norm)).collect();
    out.sort_by_key(|p| p.0);
    out
}

/// Membership of the weight-clipped union of the activated consequents.
fn aggregate_membership(rules: &RuleBase, activations: &[(usize, f64)], e: f64) -> f64 {
    activations
        .iter()
        .map(|&(i, w)| w.min(rules.rules[i].consequent.trapezoid().membership(e)))
        .fold(0.0, f64::max)
}

pub fn predict(
    model: &FittedModel,
    rules: &RuleBase,
    x_new: &TrapezoidalFuzzyNumber,
) -> Result<ForecastResult> {
    if rules.is_empty() {
        return Err(FitError::InvalidModel("rule base is empty".into()));
    }
    let crisp_core = model.crisp_estimate(x_new.modal_midpoint());
    let activations = activate(rules, crisp_core);

    let lo = activations
        .iter()
        .map(|&(i, _)| -rules.rules[i].consequent.left)
        .fold(0.0, f64::min);
    let hi = activations
        .iter()
        .map(|&(i, _)| rules.rules[i].consequent.right)
        .fold(0.0, f64::max);

    let center = if hi > lo {
        let step = (hi - lo) / (AGGREGATE_SAMPLES - 1) as f64;
        let points = (0..AGGREGATE_SAMPLES)
            .map(|k| {
                let e = if k == AGGREGATE_SAMPLES - 1 {
                    hi
                } else {
                    lo + k as f64 * step
                };
                (e, aggregate_membership(rules, &activations, e))
            })
            .collect();
        coa_defuzzify(&PiecewiseMembership::new(points)?)?.clamp(lo, hi)
    } else {
        lo
    };

    let error_term = TrapezoidalFuzzyNumber {
        l: lo,
        m1: center,
        m2: center,
        r: hi,
    };
    let response = x_new.affine_image(model.b1_c, model.b0_c) + error_term;
    Ok(ForecastResult {
        crisp_core,
        error_term,
        response,
        activations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::MembershipCurve;
    use crate::fuznum::Interval;
    use crate::spreads::SpreadConfig;

    fn tfn(l: f64, m1: f64, m2: f64, r: f64) -> TrapezoidalFuzzyNumber {
        TrapezoidalFuzzyNumber::new(l, m1, m2, r).unwrap()
    }

    fn toy_model(b0: f64, b1: f64, terms: Vec<ErrorTerm>) -> FittedModel {
        let curve = |v: f64| {
            MembershipCurve::new(vec![(0.0, Interval::point(v)), (1.0, Interval::point(v))])
                .unwrap()
        };
        let n = terms.len();
        FittedModel {
            b0_c: b0,
            b1_c: b1,
            b0_curve: curve(b0),
            b1_curve: curve(b1),
            error_terms: terms,
            per_obs_discrepancy: vec![0.0; n],
            total_discrepancy: 0.0,
            spread_config: SpreadConfig::new(0.0, 0.0).unwrap(),
        }
    }

    fn rules_from(pairs: &[(TrapezoidalFuzzyNumber, ErrorTerm)]) -> RuleBase {
        RuleBase::new(
            pairs
                .iter()
                .map(|&(a, c)| Rule {
                    antecedent: a,
                    consequent: c,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rule_base_follows_observations() {
        let data: Vec<_> = (0..5)
            .map(|i| FuzzyObservation::crisp_x(i as f64, tfn(0.0, 1.0, 1.0, 2.0 + i as f64)))
            .collect();
        let terms: Vec<_> = (0..5).map(|i| ErrorTerm::new(0.1 * i as f64, 0.2).unwrap()).collect();
        let m = toy_model(0.0, 1.0, terms.clone());
        let rb = build_rule_base(&m, &data).unwrap();
        assert_eq!(rb.len(), 5);
        for (i, r) in rb.rules().iter().enumerate() {
            assert_eq!(r.antecedent, data[i].y);
            assert_eq!(r.consequent, terms[i]);
        }
        assert!(matches!(
            build_rule_base(&m, &data[..3]),
            Err(FitError::InvalidModel(_))
        ));
        let single = toy_model(0.0, 1.0, vec![ErrorTerm::zero()]);
        assert_eq!(build_rule_base(&single, &data[..1]).unwrap().len(), 1);
    }

    #[test]
    fn activation_at_modal_value() {
        let rb = rules_from(&[
            (tfn(0.0, 1.0, 1.0, 2.0), ErrorTerm::zero()),
            (tfn(5.0, 6.0, 6.0, 7.0), ErrorTerm::zero()),
        ]);
        assert_eq!(activate(&rb, 6.0), vec![(1, 1.0)]);
        assert_eq!(activate(&rb, 0.5), vec![(0, 0.5)]);
    }

    #[test]
    fn fallback_splits_between_two_nearest() {
        let rb = rules_from(&[
            (tfn(0.0, 1.0, 1.0, 2.0), ErrorTerm::zero()),
            (tfn(5.0, 6.0, 6.0, 7.0), ErrorTerm::zero()),
            (tfn(20.0, 21.0, 21.0, 22.0), ErrorTerm::zero()),
        ]);
        // distances 1 and 2 -> weights 2/3 and 1/3
        let w = activate(&rb, 3.0);
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].0, 0);
        assert_eq!(w[1].0, 1);
        assert!((w[0].1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((w[0].1 + w[1].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_consequents_give_their_support() {
        let e = ErrorTerm::new(0.5, 0.5).unwrap();
        let rb = rules_from(&[
            (tfn(0.0, 1.0, 1.0, 2.0), e),
            (tfn(1.0, 2.0, 2.0, 3.0), e),
        ]);
        let m = toy_model(0.0, 1.0, vec![e, e]);
        for x in [1.2, 1.5, 1.9] {
            let f = predict(&m, &rb, &TrapezoidalFuzzyNumber::crisp(x)).unwrap();
            assert_eq!((f.error_term.l, f.error_term.r), (-0.5, 0.5));
            assert!(f.error_term.m1.abs() < 1e-9);
        }
    }

    #[test]
    fn single_rule_reproduces_its_consequent() {
        let e = ErrorTerm::new(1.0, 3.0).unwrap();
        let rb = rules_from(&[(tfn(10.0, 11.5, 11.5, 14.0), e)]);
        let m = toy_model(0.5, 2.2, vec![e]);
        let f = predict(&m, &rb, &TrapezoidalFuzzyNumber::crisp(5.0)).unwrap();
        assert!((f.crisp_core - 11.5).abs() < 1e-12);
        assert_eq!(f.activations, vec![(0, 1.0)]);
        assert_eq!((f.error_term.l, f.error_term.r), (-1.0, 3.0));
        // COA of (-1, 0, 0, 3) is 2/3
        assert!((f.error_term.m1 - 2.0 / 3.0).abs() < 1e-6);
        assert!((f.response.m1 - (11.5 + 2.0 / 3.0)).abs() < 1e-6);
    }

    #[test]
    fn symmetric_activation_centres_core() {
        let rb = rules_from(&[
            (tfn(0.0, 1.0, 1.0, 2.0), ErrorTerm::new(1.0, 0.2).unwrap()),
            (tfn(1.0, 2.0, 2.0, 3.0), ErrorTerm::new(0.2, 1.0).unwrap()),
        ]);
        let m = toy_model(0.0, 1.0, vec![ErrorTerm::zero(); 2]);
        let f = predict(&m, &rb, &TrapezoidalFuzzyNumber::crisp(1.5)).unwrap();
        assert!(f.error_term.m1.abs() < 1e-9);
        assert_eq!((f.error_term.l, f.error_term.r), (-1.0, 1.0));
    }

    #[test]
    fn crisp_consequents_give_crisp_error() {
        let rb = rules_from(&[(tfn(0.0, 1.0, 1.0, 2.0), ErrorTerm::zero())]);
        let m = toy_model(0.0, 1.0, vec![ErrorTerm::zero()]);
        let f = predict(&m, &rb, &tfn(0.5, 1.0, 1.0, 1.5)).unwrap();
        assert_eq!(f.error_term, TrapezoidalFuzzyNumber::crisp(0.0));
        assert_eq!(f.response, tfn(0.5, 1.0, 1.0, 1.5));
    }

    #[test]
    fn empty_rule_base_is_rejected() {
        assert!(matches!(RuleBase::new(vec![]), Err(FitError::InvalidModel(_))));
    }
}
