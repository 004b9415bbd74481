//! Domain types, parameter validation and the average-cost functions.
//!
//! Both cost functions are written over the decision pair (τ, T). Holding
//! costs are the exact integrals of the piecewise-linear inventory levels, so
//! every component is a closed-form expression.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Per-product inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ItemParams {
    /// Units per year.
    pub demand_rate: f64,
    /// Currency per unit per year.
    pub holding_cost: f64,
    /// Units inspected per year.
    pub screening_rate: f64,
    /// Expected fraction of imperfect units in a lot.
    pub defect_fraction_mean: f64,
}

impl ItemParams {
    pub fn new(demand_rate: f64, holding_cost: f64, screening_rate: f64, defect: f64) -> Self {
        Self {
            demand_rate,
            holding_cost,
            screening_rate,
            defect_fraction_mean: defect,
        }
    }

    /// `E[p] / ((1 - E[p])^2 x)`: the coefficient that turns a squared lot of
    /// perfect units into defective-stock holding time.
    pub(crate) fn defect_weight(&self) -> f64 {
        let p = self.defect_fraction_mean;
        p / ((1.0 - p) * (1.0 - p) * self.screening_rate)
    }
}

/// Full model input. Item 1 is the major (substituting) product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub item1: ItemParams,
    pub item2: ItemParams,
    /// Currency per replenishment cycle, shared by both products.
    pub ordering_cost: f64,
    /// Currency per unit of item 1 converted to serve item-2 demand.
    pub transfer_cost: f64,
}

impl SystemParams {
    /// Demand 1000/yr for both items, ordering cost 4500, item-1 holding 1,
    /// screening rates 175200 and 175100, with item-2 holding 5, transfer
    /// cost 1 and perfect quality.
    pub fn reference() -> Self {
        Self {
            item1: ItemParams::new(1000.0, 1.0, 175_200.0, 0.0),
            item2: ItemParams::new(1000.0, 5.0, 175_100.0, 0.0),
            ordering_cost: 4500.0,
            transfer_cost: 1.0,
        }
    }

    pub fn with_defects(mut self, p1: f64, p2: f64) -> Self {
        self.item1.defect_fraction_mean = p1;
        self.item2.defect_fraction_mean = p2;
        self
    }

    /// Same system with perfect-quality lots.
    pub fn without_defects(self) -> Self {
        self.with_defects(0.0, 0.0)
    }

    pub fn total_demand(&self) -> f64 {
        self.item1.demand_rate + self.item2.demand_rate
    }

    /// `c_h2 - c_h1`.
    pub fn holding_gap(&self) -> f64 {
        self.item2.holding_cost - self.item1.holding_cost
    }

    pub fn has_defects(&self) -> bool {
        self.item1.defect_fraction_mean != 0.0 || self.item2.defect_fraction_mean != 0.0
    }
}

/// Which modelling assumption a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Rates and costs must be finite and positive (transfer cost may be zero).
    #[serde(rename = "DOMAIN")]
    Domain,
    /// Defect fractions are fractions in `[0, 1)`.
    A5,
    /// Screening is faster than demand.
    A6,
    /// `E[p] < 1 - D/x`.
    A7,
    /// `c_h2 > c_h1`.
    A9,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::Domain => "DOMAIN",
            Rule::A5 => "A5",
            Rule::A6 => "A6",
            Rule::A7 => "A7",
            Rule::A9 => "A9",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Rule::Domain => write!(f, "{}: {}", self.field, self.message),
            rule => write!(
                f,
                "assumption {} violated by {}: {}",
                &rule.code()[1..],
                self.field,
                self.message
            ),
        }
    }
}

fn violation(rule: Rule, field: &str, message: String) -> Violation {
    Violation {
        rule,
        field: field.to_string(),
        message,
    }
}

/// Checks every parameter invariant, including the imperfect-quality ones.
/// An empty result means the parameters are valid.
pub fn validate(params: &SystemParams) -> Vec<Violation> {
    let mut out = domain_violations(params);
    for (prefix, item) in [("item1", &params.item1), ("item2", &params.item2)] {
        let p = item.defect_fraction_mean;
        let x = item.screening_rate;
        let d = item.demand_rate;
        if !(p.is_finite() && (0.0..1.0).contains(&p)) {
            out.push(violation(
                Rule::A5,
                &format!("{prefix}.defect_fraction_mean"),
                format!("expected defect fraction {p} is not in [0, 1)"),
            ));
        }
        if x.is_finite() && d.is_finite() && x <= d {
            out.push(violation(
                Rule::A6,
                &format!("{prefix}.screening_rate"),
                format!("screening rate {x} does not exceed demand rate {d}"),
            ));
        }
        if p.is_finite() && x.is_finite() && x > 0.0 && p >= 1.0 - d / x {
            out.push(violation(
                Rule::A7,
                &format!("{prefix}.defect_fraction_mean"),
                format!("expected defect fraction {p} is not below 1 - D/x = {}", 1.0 - d / x),
            ));
        }
    }
    out.extend(holding_order_violation(params));
    out
}

/// Validation for the perfect-quality model: screening and defect inputs are
/// ignored.
pub fn validate_basic(params: &SystemParams) -> Vec<Violation> {
    let mut out: Vec<_> = domain_violations(params)
        .into_iter()
        .filter(|v| !v.field.ends_with("screening_rate"))
        .collect();
    out.extend(holding_order_violation(params));
    out
}

fn domain_violations(params: &SystemParams) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut positive = |field: &str, value: f64| {
        if !(value.is_finite() && value > 0.0) {
            out.push(violation(
                Rule::Domain,
                field,
                format!("must be finite and positive, got {value}"),
            ));
        }
    };
    positive("item1.demand_rate", params.item1.demand_rate);
    positive("item1.holding_cost", params.item1.holding_cost);
    positive("item1.screening_rate", params.item1.screening_rate);
    positive("item2.demand_rate", params.item2.demand_rate);
    positive("item2.holding_cost", params.item2.holding_cost);
    positive("item2.screening_rate", params.item2.screening_rate);
    positive("ordering_cost", params.ordering_cost);
    let ct = params.transfer_cost;
    if !(ct.is_finite() && ct >= 0.0) {
        out.push(violation(
            Rule::Domain,
            "transfer_cost",
            format!("must be finite and non-negative, got {ct}"),
        ));
    }
    out
}

fn holding_order_violation(params: &SystemParams) -> Option<Violation> {
    let (h1, h2) = (params.item1.holding_cost, params.item2.holding_cost);
    (h1.is_finite() && h2.is_finite() && h2 <= h1).then(|| {
        violation(
            Rule::A9,
            "item2.holding_cost",
            format!("item-2 holding cost {h2} must exceed item-1 holding cost {h1}"),
        )
    })
}

/// Decision pair: run-out time of item 2 and cycle time, both in years.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    pub runout_time: f64,
    pub cycle_time: f64,
}

impl Policy {
    pub fn new(runout_time: f64, cycle_time: f64) -> Result<Self, ModelError> {
        let policy = Self {
            runout_time,
            cycle_time,
        };
        policy.check()?;
        Ok(policy)
    }

    pub fn check(&self) -> Result<(), ModelError> {
        let (tau, t) = (self.runout_time, self.cycle_time);
        if !(t.is_finite() && t > 0.0) {
            return Err(ModelError::CycleTime(t));
        }
        if !(tau.is_finite() && (0.0..=t).contains(&tau)) {
            return Err(ModelError::RunoutTime { tau, cycle: t });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LotPlan {
    pub lot1: f64,
    pub lot2: f64,
}

/// Average (per-year) or per-cycle cost components, depending on context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub ordering: f64,
    pub holding1: f64,
    pub holding2: f64,
    pub transfer: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn from_parts(ordering: f64, holding1: f64, holding2: f64, transfer: f64) -> Self {
        Self {
            ordering,
            holding1,
            holding2,
            transfer,
            total: ordering + holding1 + holding2 + transfer,
        }
    }

    /// Divides every component by `divisor` and re-sums.
    pub fn per(&self, divisor: f64) -> Self {
        Self::from_parts(
            self.ordering / divisor,
            self.holding1 / divisor,
            self.holding2 / divisor,
            self.transfer / divisor,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreeningEpochs {
    pub ts1: f64,
    pub ts2: f64,
}

/// `t_si = y_i / x_i`.
pub fn screening_epochs(params: &SystemParams, lots: &LotPlan) -> ScreeningEpochs {
    ScreeningEpochs {
        ts1: lots.lot1 / params.item1.screening_rate,
        ts2: lots.lot2 / params.item2.screening_rate,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("cycle time must be finite and positive, got {0}")]
    CycleTime(f64),
    #[error("run-out time {tau} must lie in [0, {cycle}]")]
    RunoutTime { tau: f64, cycle: f64 },
}

/// Cost model selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Perfect-quality lots.
    Basic,
    /// Imperfect-quality lots with screening.
    Eoqiss,
}

impl Model {
    pub fn tac(self, params: &SystemParams, policy: Policy) -> Result<CostBreakdown, ModelError> {
        match self {
            Model::Basic => tac_basic(params, policy),
            Model::Eoqiss => tac_eoqiss(params, policy),
        }
    }

    /// The parameters this model actually sees.
    pub fn effective(self, params: &SystemParams) -> SystemParams {
        match self {
            Model::Basic => params.without_defects(),
            Model::Eoqiss => *params,
        }
    }

    pub fn validate(self, params: &SystemParams) -> Vec<Violation> {
        match self {
            Model::Basic => validate_basic(params),
            Model::Eoqiss => validate(params),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Basic => "basic",
            Model::Eoqiss => "eoqiss",
        })
    }
}

/// Average cost of the perfect-quality model.
pub fn tac_basic(params: &SystemParams, policy: Policy) -> Result<CostBreakdown, ModelError> {
    policy.check()?;
    Ok(average_cost(params, policy, 0.0, 0.0))
}

/// Average cost with imperfect-quality lots. Defective units are held until
/// their lot finishes screening, adding `E[p_i] y_i^2 / x_i` unit-years per
/// cycle for each item.
pub fn tac_eoqiss(params: &SystemParams, policy: Policy) -> Result<CostBreakdown, ModelError> {
    policy.check()?;
    Ok(average_cost(
        params,
        policy,
        params.item1.defect_weight(),
        params.item2.defect_weight(),
    ))
}

/// Per-cycle cost of the imperfect-quality model.
pub fn tc_eoqiss(params: &SystemParams, policy: Policy) -> Result<f64, ModelError> {
    Ok(tac_eoqiss(params, policy)?.total * policy.cycle_time)
}

// With zero weights the defect terms add exactly 0.0, so both models agree
// bit for bit on perfect-quality inputs.
fn average_cost(params: &SystemParams, policy: Policy, w1: f64, w2: f64) -> CostBreakdown {
    let Policy {
        runout_time: tau,
        cycle_time: t,
    } = policy;
    let (d1, d2) = (params.item1.demand_rate, params.item2.demand_rate);
    let (h1, h2) = (params.item1.holding_cost, params.item2.holding_cost);
    let perfect1 = params.total_demand() * t - d2 * tau;
    let perfect2 = d2 * tau;

    let holding1 = h1 * (d1 * t / 2.0 + d2 / 2.0 * (t - tau * tau / t)) + h1 * w1 * perfect1 * perfect1 / t;
    let holding2 = h2 * d2 * tau * tau / (2.0 * t) + h2 * w2 * perfect2 * perfect2 / t;
    let transfer = d2 * params.transfer_cost * (1.0 - tau / t);
    CostBreakdown::from_parts(params.ordering_cost / t, holding1, holding2, transfer)
}

/// Order quantities that make both inventories of perfect units run out
/// exactly at τ (item 2) and T (item 1).
pub fn lot_plan(params: &SystemParams, policy: Policy) -> Result<LotPlan, ModelError> {
    policy.check()?;
    let Policy {
        runout_time: tau,
        cycle_time: t,
    } = policy;
    let d2 = params.item2.demand_rate;
    Ok(LotPlan {
        lot1: (params.total_demand() * t - d2 * tau) / (1.0 - params.item1.defect_fraction_mean),
        lot2: d2 * tau / (1.0 - params.item2.defect_fraction_mean),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_with_defects() -> SystemParams {
        SystemParams::reference().with_defects(0.02, 0.02)
    }

    #[test]
    fn reference_params_are_valid() {
        assert!(validate(&reference_with_defects()).is_empty());
        assert!(validate(&SystemParams::reference()).is_empty());
    }

    #[test]
    fn holding_order_breach_is_a9() {
        let mut p = reference_with_defects();
        p.item2.holding_cost = 0.5;
        let v = validate(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::A9);
        assert_eq!(v[0].field, "item2.holding_cost");
        assert!(v[0].to_string().contains("assumption 9"));
    }

    #[test]
    fn large_defect_fraction_is_a7() {
        let mut p = reference_with_defects();
        p.item1.defect_fraction_mean = 0.999;
        let v = validate(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::A7);
        assert_eq!(v[0].field, "item1.defect_fraction_mean");
    }

    #[test]
    fn slow_screening_is_a6_and_a7() {
        let mut p = reference_with_defects();
        p.item2.screening_rate = 900.0;
        let rules: Vec<_> = validate(&p).iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec![Rule::A6, Rule::A7]);
        // the basic model does not care about screening
        assert!(validate_basic(&p).is_empty());
    }

    #[test]
    fn every_breach_is_reported() {
        let mut p = reference_with_defects();
        p.ordering_cost = -1.0;
        p.transfer_cost = f64::NAN;
        p.item1.defect_fraction_mean = -0.1;
        p.item2.holding_cost = 0.5;
        let rules: Vec<_> = validate(&p).iter().map(|v| v.rule).collect();
        assert_eq!(rules, vec![Rule::Domain, Rule::Domain, Rule::A5, Rule::A9]);
    }

    #[test]
    fn no_substitution_collapse() {
        let p = SystemParams::reference();
        let c = tac_basic(&p, Policy::new(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(
            (c.ordering, c.holding1, c.holding2, c.transfer),
            (4500.0, 500.0, 2500.0, 0.0)
        );
        assert_eq!(c.total, 7500.0);
        assert_eq!(tc_eoqiss(&p, Policy::new(1.0, 1.0).unwrap()).unwrap(), 7500.0);
    }

    #[test]
    fn full_substitution_collapse() {
        let p = SystemParams::reference();
        let c = tac_basic(&p, Policy::new(0.0, 1.0).unwrap()).unwrap();
        assert_eq!(
            (c.ordering, c.holding1, c.holding2, c.transfer),
            (4500.0, 1000.0, 0.0, 1000.0)
        );
        assert_eq!(c.total, 6500.0);
    }

    #[test]
    fn rejects_bad_policies() {
        let p = SystemParams::reference();
        let bad = [
            Policy {
                runout_time: 0.5,
                cycle_time: 0.0,
            },
            Policy {
                runout_time: 1.5,
                cycle_time: 1.0,
            },
            Policy {
                runout_time: -0.1,
                cycle_time: 1.0,
            },
            Policy {
                runout_time: 0.1,
                cycle_time: f64::INFINITY,
            },
        ];
        for policy in bad {
            assert!(tac_basic(&p, policy).is_err());
            assert!(tac_eoqiss(&p, policy).is_err());
            assert!(lot_plan(&p, policy).is_err());
        }
    }

    #[test]
    fn item2_holding_at_no_substitution_without_item2_defects() {
        let p = SystemParams::reference().with_defects(0.05, 0.0);
        let c = tac_eoqiss(&p, Policy::new(1.7, 1.7).unwrap()).unwrap();
        assert_eq!(c.holding2, 5.0 * 1000.0 * 1.7 / 2.0);
    }

    #[test]
    fn perfect_quality_reduces_to_basic() {
        let p = SystemParams::reference();
        let policy = Policy::new(0.25, 2.09165).unwrap();
        assert_eq!(tac_eoqiss(&p, policy).unwrap(), tac_basic(&p, policy).unwrap());
    }

    #[test]
    fn lots_at_reference_optimum() {
        let p = SystemParams::reference();
        let lots = lot_plan(&p, Policy::new(0.25, 2.09165).unwrap()).unwrap();
        assert!((lots.lot1 - 3933.3).abs() < 1e-9);
        assert_eq!(lots.lot2, 250.0);

        let q = reference_with_defects();
        let lots = lot_plan(&q, Policy::new(0.25, 2.09165).unwrap()).unwrap();
        assert!((lots.lot2 - 250.0 / 0.98).abs() < 1e-12);
        assert!((lots.lot2 - 255.10).abs() < 5e-3);

        let lots = lot_plan(&q, Policy::new(0.0, 2.0).unwrap()).unwrap();
        assert_eq!(lots.lot2, 0.0);
    }

    #[test]
    fn screening_epochs_follow_lots() {
        let q = reference_with_defects();
        let lots = lot_plan(&q, Policy::new(0.25, 2.09).unwrap()).unwrap();
        let e = screening_epochs(&q, &lots);
        assert_eq!(e.ts1, lots.lot1 / 175_200.0);
        assert_eq!(e.ts2, lots.lot2 / 175_100.0);
        assert!(e.ts2 < 0.25 && e.ts1 < 2.09);
    }
}
