//! Optimal policies for both cost models in every substitution regime.
//!
//! | model   | partial                     | full            | none            |
//! |---------|-----------------------------|-----------------|-----------------|
//! | basic   | closed form                 | closed form     | closed form     |
//! | eoqiss  | fixed point on (τ, T)       | closed form     | closed form     |
//!
//! The `auto` regime picks between partial and no substitution; full
//! substitution is never optimal while the transfer cost is positive.

mod basic;
mod convexity;
mod eoqiss;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{lot_plan, CostBreakdown, LotPlan, Model, ModelError, Policy, SystemParams, Violation};

pub use basic::{solve_basic, solve_basic_full, solve_basic_none, solve_basic_partial};
pub use convexity::{
    basic_convexity_holds, basic_hessian_determinant, eoqiss_convexity_holds, hessian, transfer_cost_bound, Hessian2,
};
pub use eoqiss::{
    eoqiss_runout, solve_eoqiss_auto, solve_eoqiss_full, solve_eoqiss_none, solve_eoqiss_partial, CostDecomposition,
};

/// Realized regime of a policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubstitutionMode {
    /// `0 < τ < T`.
    Partial,
    /// `τ = 0`.
    Full,
    /// `τ = T`.
    #[serde(rename = "none")]
    NoSubstitution,
}

impl fmt::Display for SubstitutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubstitutionMode::Partial => "partial",
            SubstitutionMode::Full => "full",
            SubstitutionMode::NoSubstitution => "none",
        })
    }
}

/// Requested regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Partial,
    Full,
    #[serde(rename = "none")]
    NoSubstitution,
    Auto,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Partial => "partial",
            Regime::Full => "full",
            Regime::NoSubstitution => "none",
            Regime::Auto => "auto",
        })
    }
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "partial" => Ok(Regime::Partial),
            "full" => Ok(Regime::Full),
            "none" => Ok(Regime::NoSubstitution),
            "auto" => Ok(Regime::Auto),
            other => Err(format!(
                "unknown regime `{other}` (expected partial, full, none or auto)"
            )),
        }
    }
}

/// Which set of formulas a solver uses where the published ones and the
/// derived ones differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulas {
    #[default]
    Derived,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointSettings {
    /// Relative change of (τ, T) below which the iteration stops.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FixedPointSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 100,
        }
    }
}

impl FixedPointSettings {
    pub fn check(&self) -> Result<(), SolveError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(SolveError::Settings(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(SolveError::Settings("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Step-1 quantities of the solution algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSeed {
    /// Printed no-substitution cycle time `T0`.
    pub cycle_time: f64,
    /// Run-out time from the τ-stationarity condition at `T0`.
    pub runout_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub model: Model,
    pub regime: Regime,
    pub formulas: Formulas,
    pub mode: SubstitutionMode,
    pub policy: Policy,
    pub lots: LotPlan,
    /// Item-2 demand served from converted item-1 stock per cycle, `D2 (T - τ)`.
    pub transfer_volume: f64,
    pub cost: CostBreakdown,
    /// Transfer-cost bound that makes the perfect-quality cost convex.
    pub basic_convexity: Option<bool>,
    /// Sufficient convexity condition of the imperfect-quality cost at the policy.
    pub eoqiss_convexity: Option<bool>,
    /// Positive curvature of the cost at the policy: a positive definite
    /// Hessian for interior policies, a positive second derivative along the
    /// active boundary otherwise.
    pub hessian_psd: bool,
    pub iterations: Option<usize>,
    pub seed: Option<AlgorithmSeed>,
    /// `|TAC_solver - TAC_oracle| / TAC_oracle`, filled in by [`crate::oracle::verify`].
    pub oracle_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid parameters: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("fixed point did not converge in {iterations} iterations (last τ = {}, T = {})", .last.runout_time, .last.cycle_time)]
    NoConvergence { iterations: usize, last: Policy },
    #[error("finite-difference step {0} is too small for the evaluation point")]
    NumericalStep(f64),
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Solves `params` under `model` for the requested regime.
pub fn solve(
    params: &SystemParams,
    model: Model,
    regime: Regime,
    settings: &FixedPointSettings,
    formulas: Formulas,
) -> Result<SolveReport, SolveError> {
    match (model, regime) {
        (Model::Basic, Regime::Partial) => basic::partial(params, Regime::Partial, formulas),
        (Model::Basic, Regime::Full) => basic::full(params, Regime::Full, formulas),
        (Model::Basic, Regime::NoSubstitution) => basic::none(params, Regime::NoSubstitution, formulas),
        (Model::Basic, Regime::Auto) => basic::auto(params, formulas),
        (Model::Eoqiss, Regime::Partial) => eoqiss::partial(params, settings, Regime::Partial, formulas),
        (Model::Eoqiss, Regime::Full) => eoqiss::full(params, Regime::Full, formulas),
        (Model::Eoqiss, Regime::NoSubstitution) => eoqiss::none(params, Regime::NoSubstitution, formulas),
        (Model::Eoqiss, Regime::Auto) => eoqiss::auto(params, settings, formulas),
    }
}

fn check_valid(params: &SystemParams, model: Model) -> Result<(), SolveError> {
    let violations = model.validate(params);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(SolveError::Invalid(violations))
    }
}

const HESSIAN_STEP: f64 = 1e-4;

struct Draft {
    model: Model,
    regime: Regime,
    formulas: Formulas,
    mode: SubstitutionMode,
    policy: Policy,
    iterations: Option<usize>,
    seed: Option<AlgorithmSeed>,
}

impl Draft {
    fn finish(self, params: &SystemParams) -> Result<SolveReport, SolveError> {
        let effective = self.model.effective(params);
        let policy = self.policy;
        policy.check()?;
        let cost = self.model.tac(&effective, policy)?;
        let lots = lot_plan(&effective, policy)?;
        let eoqiss_convexity = match self.model {
            Model::Basic => None,
            Model::Eoqiss => Some(eoqiss_convexity_holds(params, policy)),
        };
        Ok(SolveReport {
            model: self.model,
            regime: self.regime,
            formulas: self.formulas,
            mode: self.mode,
            policy,
            lots,
            transfer_volume: params.item2.demand_rate * (policy.cycle_time - policy.runout_time),
            cost,
            basic_convexity: Some(basic_convexity_holds(params)),
            eoqiss_convexity,
            hessian_psd: curvature_positive(self.model, &effective, policy, self.mode),
            iterations: self.iterations,
            seed: self.seed,
            oracle_residual: None,
        })
    }
}

fn curvature_positive(model: Model, params: &SystemParams, policy: Policy, mode: SubstitutionMode) -> bool {
    let cost = |tau: f64, t: f64| {
        model
            .tac(
                params,
                Policy {
                    runout_time: tau,
                    cycle_time: t,
                },
            )
            .map_or(f64::NAN, |c| c.total)
    };
    match mode {
        SubstitutionMode::Partial if policy.runout_time > 0.0 => {
            hessian(cost, policy, HESSIAN_STEP).is_ok_and(|h| h.positive_definite())
        }
        _ => {
            // second difference along the active edge (τ = 0, τ = T, or the
            // degenerate partial policy with τ = 0)
            let t = policy.cycle_time;
            let h = HESSIAN_STEP * t;
            let on_edge = |t: f64| match mode {
                SubstitutionMode::NoSubstitution => cost(t, t),
                _ => cost(0.0, t),
            };
            let second = (on_edge(t + h) - 2.0 * on_edge(t) + on_edge(t - h)) / (h * h);
            second > 0.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_names_round_trip() {
        for r in [Regime::Partial, Regime::Full, Regime::NoSubstitution, Regime::Auto] {
            assert_eq!(r.to_string().parse::<Regime>().unwrap(), r);
        }
        assert!("sometimes".parse::<Regime>().is_err());
    }

    #[test]
    fn settings_are_checked() {
        assert!(FixedPointSettings::default().check().is_ok());
        let bad = FixedPointSettings {
            tolerance: 0.0,
            max_iterations: 10,
        };
        assert!(bad.check().is_err());
        let bad = FixedPointSettings {
            tolerance: 1e-9,
            max_iterations: 0,
        };
        assert!(bad.check().is_err());
    }
}
