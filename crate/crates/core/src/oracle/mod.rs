//! Ground truth for the closed forms: trajectory simulation with exact
//! piecewise integration, and a derivative-free minimizer over (τ, T).
//!
//! Nothing here uses the cost formulas of [`crate::model`]; only the lot
//! sizes are shared, and the simulator rejects any lot that does not run both
//! inventories down to zero on schedule.

mod minimize;
mod simulate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use minimize::{golden_section, minimize_1d, minimize_2d, Minimum, SearchRegion};
pub use simulate::{simulate_cycle, CycleTrace, SimulatedCycle, TrajectorySegment};

use crate::model::{ModelError, Policy, SystemParams};
use crate::solvers::{Regime, SolveReport};

/// Default ceiling on the relative gap between a solver optimum and the
/// oracle optimum.
pub const DEFAULT_CEILING: f64 = 1e-4;

/// Simulated and closed-form costs at the same policy must agree this closely.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("infeasible policy: {0}")]
    InfeasiblePolicy(String),
    #[error("invalid search region: {0}")]
    Region(String),
    #[error(
        "verification failed: solver policy (τ = {}, T = {}) costs {solver_cost}, oracle policy (τ = {}, T = {}) costs {oracle_cost}, residual {residual:.3e}",
        .solver.runout_time, .solver.cycle_time, .oracle.runout_time, .oracle.cycle_time
    )]
    Residual {
        solver: Policy,
        oracle: Policy,
        solver_cost: f64,
        oracle_cost: f64,
        residual: f64,
    },
    #[error("reported cost {reported} differs from the simulated cost {simulated} at the same policy (relative gap {gap:.3e})")]
    Inconsistent { reported: f64, simulated: f64, gap: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    /// The input report with `oracle_residual` filled in.
    pub report: SolveReport,
    pub oracle: Minimum,
    /// Relative gap between the reported and the simulated cost at the
    /// report's policy.
    pub consistency_gap: f64,
}

pub fn verify(report: &SolveReport, params: &SystemParams, region: &SearchRegion) -> Result<Verification, OracleError> {
    verify_with_ceiling(report, params, region, DEFAULT_CEILING)
}

/// Checks a solver report against the simulator.
///
/// The simulated average cost at the report's policy must match the reported
/// cost, and must be within `ceiling` (relative) of the oracle minimum. For
/// forced full or no-substitution solves the oracle is restricted to the
/// corresponding edge `τ = 0` or `τ = T`.
// negated comparisons so that NaN gaps fail
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn verify_with_ceiling(
    report: &SolveReport,
    params: &SystemParams,
    region: &SearchRegion,
    ceiling: f64,
) -> Result<Verification, OracleError> {
    region.check()?;
    let effective = report.model.effective(params);
    let simulated = simulate_cycle(&effective, report.policy)?.average().total;
    let gap = (report.cost.total - simulated).abs() / simulated.abs();
    if !(gap <= CONSISTENCY_TOLERANCE) {
        return Err(OracleError::Inconsistent {
            reported: report.cost.total,
            simulated,
            gap,
        });
    }

    let cost = |tau: f64, t: f64| {
        Policy::new(tau, t)
            .ok()
            .and_then(|p| simulate_cycle(&effective, p).ok())
            .map_or(f64::INFINITY, |s| s.average().total)
    };
    let oracle = match report.regime {
        Regime::Partial | Regime::Auto => minimize_2d(cost, region)?,
        Regime::Full | Regime::NoSubstitution => {
            let edge = report.regime;
            let line = |t: f64| if edge == Regime::Full { cost(0.0, t) } else { cost(t, t) };
            let (t, value) = minimize_1d(
                line,
                region.cycle_range,
                region.coarse_resolution,
                region.refine_tolerance,
            );
            let tau = if edge == Regime::Full { 0.0 } else { t };
            Minimum {
                policy: Policy {
                    runout_time: tau,
                    cycle_time: t,
                },
                value,
            }
        }
    };
    if !oracle.value.is_finite() {
        return Err(OracleError::Region("oracle found no feasible policy".into()));
    }

    let residual = (simulated - oracle.value).abs() / oracle.value;
    if !(residual <= ceiling) {
        return Err(OracleError::Residual {
            solver: report.policy,
            oracle: oracle.policy,
            solver_cost: simulated,
            oracle_cost: oracle.value,
            residual,
        });
    }
    let mut report = report.clone();
    report.oracle_residual = Some(residual);
    Ok(Verification {
        report,
        oracle,
        consistency_gap: gap,
    })
}
