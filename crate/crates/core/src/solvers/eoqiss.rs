//! Optima of the imperfect-quality model.
//!
//! Expanding the average cost gives `TAC(τ, T) = α T + β(τ) / T + γ(τ)` with
//!
//! ```text
//! α    = c_h1 S / 2 + c_h1 w1 S²
//! β(τ) = c_o + q τ² - D2 c_t τ,   q = c_h1 w1 D2² + (c_h2 - c_h1) D2 / 2 + c_h2 w2 D2²
//! γ(τ) = D2 c_t - 2 c_h1 w1 S D2 τ
//! ```
//!
//! where `S = D1 + D2` and `w_i = E[p_i] / ((1 - E[p_i])² x_i)`. For fixed τ
//! the optimal cycle is `sqrt(β / α)`; for fixed T the optimal run-out time
//! is affine in T. The partial solver alternates the two.

use super::{
    check_valid, AlgorithmSeed, Draft, FixedPointSettings, Formulas, Regime, SolveError, SolveReport, SubstitutionMode,
};
use crate::model::{Model, Policy, SystemParams};
use crate::printed;

/// Coefficients of the cost decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostDecomposition {
    pub alpha: f64,
    /// Coefficient of τ² in β.
    pub quadratic: f64,
    /// Coefficient of τ in β, `-D2 c_t`.
    pub linear: f64,
    pub constant: f64,
}

impl CostDecomposition {
    pub fn new(params: &SystemParams) -> Self {
        Self::with_item2_weight(params, params.item2.demand_rate)
    }

    /// `item2_scale` multiplies `c_h2 w2 D2`: `D2` for the integrated cost, 1
    /// for the printed one.
    fn with_item2_weight(params: &SystemParams, item2_scale: f64) -> Self {
        let (i1, i2) = (&params.item1, &params.item2);
        let s = params.total_demand();
        let d2 = i2.demand_rate;
        let w1 = i1.defect_weight();
        let w2 = i2.defect_weight();
        Self {
            alpha: i1.holding_cost * s / 2.0 + i1.holding_cost * w1 * s * s,
            quadratic: i1.holding_cost * w1 * d2 * d2
                + params.holding_gap() * d2 / 2.0
                + i2.holding_cost * w2 * d2 * item2_scale,
            linear: -d2 * params.transfer_cost,
            constant: params.ordering_cost,
        }
    }

    pub fn beta(&self, tau: f64) -> f64 {
        self.constant + self.quadratic * tau * tau + self.linear * tau
    }

    pub fn optimal_cycle(&self, tau: f64) -> Option<f64> {
        let beta = self.beta(tau);
        (beta > 0.0).then(|| (beta / self.alpha).sqrt())
    }
}

/// Run-out time minimizing the cost at a fixed cycle time:
/// `(c_t + 2 c_h1 w1 S T) / (c_h2 - c_h1 + 2 c_h1 w1 D2 + 2 c_h2 w2 D2)`.
pub fn eoqiss_runout(params: &SystemParams, cycle_time: f64) -> f64 {
    let (i1, i2) = (&params.item1, &params.item2);
    let w1 = i1.defect_weight();
    let w2 = i2.defect_weight();
    let d2 = i2.demand_rate;
    let num = params.transfer_cost + 2.0 * i1.holding_cost * w1 * params.total_demand() * cycle_time;
    let den = params.holding_gap() + 2.0 * i1.holding_cost * w1 * d2 + 2.0 * i2.holding_cost * w2 * d2;
    num / den
}

fn runout(params: &SystemParams, cycle_time: f64, formulas: Formulas) -> f64 {
    match formulas {
        Formulas::Derived => eoqiss_runout(params, cycle_time),
        Formulas::Printed => printed::eoqiss_runout(params, cycle_time),
    }
}

fn decomposition(params: &SystemParams, formulas: Formulas) -> CostDecomposition {
    match formulas {
        Formulas::Derived => CostDecomposition::new(params),
        Formulas::Printed => CostDecomposition::with_item2_weight(params, 1.0),
    }
}

pub fn solve_eoqiss_partial(params: &SystemParams, settings: &FixedPointSettings) -> Result<SolveReport, SolveError> {
    partial(params, settings, Regime::Partial, Formulas::Derived)
}

pub fn solve_eoqiss_full(params: &SystemParams) -> Result<SolveReport, SolveError> {
    full(params, Regime::Full, Formulas::Derived)
}

pub fn solve_eoqiss_none(params: &SystemParams) -> Result<SolveReport, SolveError> {
    none(params, Regime::NoSubstitution, Formulas::Derived)
}

/// Seeded decision between partial and no substitution: compare the printed
/// no-substitution cycle `T0` with the run-out time at `T0`.
pub fn solve_eoqiss_auto(params: &SystemParams, settings: &FixedPointSettings) -> Result<SolveReport, SolveError> {
    auto(params, settings, Formulas::Derived)
}

fn seed(params: &SystemParams, formulas: Formulas) -> AlgorithmSeed {
    let cycle_time = printed::eoqiss_none_cycle(params);
    AlgorithmSeed {
        cycle_time,
        runout_time: runout(params, cycle_time, formulas),
    }
}

fn draft(regime: Regime, formulas: Formulas, mode: SubstitutionMode, policy: Policy) -> Draft {
    Draft {
        model: Model::Eoqiss,
        regime,
        formulas,
        mode,
        policy,
        iterations: None,
        seed: None,
    }
}

pub(super) fn partial(
    params: &SystemParams,
    settings: &FixedPointSettings,
    regime: Regime,
    formulas: Formulas,
) -> Result<SolveReport, SolveError> {
    check_valid(params, Model::Eoqiss)?;
    settings.check()?;
    if !super::basic_convexity_holds(params) {
        return Err(SolveError::Infeasible(format!(
            "no interior optimum: transfer cost {} is not below the convexity bound sqrt(2 c_o (c_h2 - c_h1) / D2) = {}",
            params.transfer_cost,
            super::transfer_cost_bound(params)
        )));
    }
    let parts = decomposition(params, formulas);
    let seed = seed(params, formulas);
    let close = |a: f64, b: f64| (a - b).abs() <= settings.tolerance * a.abs().max(b.abs());

    let mut t = seed.cycle_time;
    let mut tau = seed.runout_time;
    let mut converged = None;
    for iteration in 1..=settings.max_iterations {
        let t_next = parts.optimal_cycle(tau).ok_or_else(|| {
            SolveError::Infeasible(format!(
                "cost numerator β(τ) = {} is not positive at τ = {tau}",
                parts.beta(tau)
            ))
        })?;
        let tau_next = runout(params, t_next, formulas);
        let done = close(t, t_next) && close(tau, tau_next);
        t = t_next;
        tau = tau_next;
        if done {
            converged = Some(iteration);
            break;
        }
    }
    let Some(iterations) = converged else {
        return Err(SolveError::NoConvergence {
            iterations: settings.max_iterations,
            last: Policy {
                runout_time: tau,
                cycle_time: t,
            },
        });
    };

    if tau >= t {
        return none(params, regime, formulas);
    }
    let mut d = draft(
        regime,
        formulas,
        SubstitutionMode::Partial,
        Policy {
            runout_time: tau,
            cycle_time: t,
        },
    );
    d.iterations = Some(iterations);
    d.seed = Some(seed);
    d.finish(params)
}

pub(super) fn full(params: &SystemParams, regime: Regime, formulas: Formulas) -> Result<SolveReport, SolveError> {
    check_valid(params, Model::Eoqiss)?;
    let t = match formulas {
        Formulas::Derived => {
            let alpha = CostDecomposition::new(params).alpha;
            (params.ordering_cost / alpha).sqrt()
        }
        Formulas::Printed => printed::eoqiss_full_cycle(params),
    };
    draft(
        regime,
        formulas,
        SubstitutionMode::Full,
        Policy {
            runout_time: 0.0,
            cycle_time: t,
        },
    )
    .finish(params)
}

pub(super) fn none(params: &SystemParams, regime: Regime, formulas: Formulas) -> Result<SolveReport, SolveError> {
    check_valid(params, Model::Eoqiss)?;
    let seed = seed(params, formulas);
    let t = match formulas {
        Formulas::Derived => {
            let (i1, i2) = (&params.item1, &params.item2);
            let (d1, d2) = (i1.demand_rate, i2.demand_rate);
            let alpha = i1.holding_cost * (d1 / 2.0 + i1.defect_weight() * d1 * d1)
                + i2.holding_cost * (d2 / 2.0 + i2.defect_weight() * d2 * d2);
            (params.ordering_cost / alpha).sqrt()
        }
        Formulas::Printed => seed.cycle_time,
    };
    let mut d = draft(
        regime,
        formulas,
        SubstitutionMode::NoSubstitution,
        Policy {
            runout_time: t,
            cycle_time: t,
        },
    );
    d.seed = Some(seed);
    d.finish(params)
}

pub(super) fn auto(
    params: &SystemParams,
    settings: &FixedPointSettings,
    formulas: Formulas,
) -> Result<SolveReport, SolveError> {
    check_valid(params, Model::Eoqiss)?;
    let s = seed(params, formulas);
    if s.cycle_time <= s.runout_time {
        return none(params, Regime::Auto, formulas);
    }
    match partial(params, settings, Regime::Auto, formulas) {
        Err(SolveError::Infeasible(_)) => none(params, Regime::Auto, formulas),
        other => other,
    }
}
