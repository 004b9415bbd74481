//! As-published formulas that disagree with a re-derivation of the cost
//! model. They are kept verbatim so the original algorithm can be replayed
//! side by side with the corrected one; the solvers only use them when asked
//! for [`Formulas::Printed`](crate::solvers::Formulas::Printed).

use crate::model::{CostBreakdown, ModelError, Policy, SystemParams};

/// No-substitution cycle time of the perfect-quality model as printed, with
/// the item-1 holding cost applied to both demands.
pub fn basic_none_cycle(params: &SystemParams) -> f64 {
    let h1 = params.item1.holding_cost;
    (2.0 * params.ordering_cost / (h1 * params.item1.demand_rate + h1 * params.item2.demand_rate)).sqrt()
}

/// The quantity printed as the full-substitution "y2". It is the volume of
/// item-2 demand served by conversion in one cycle, not an order size.
pub fn full_substitution_transfer_volume(params: &SystemParams) -> f64 {
    params.item2.demand_rate * (2.0 * params.ordering_cost / (params.item1.holding_cost * params.total_demand())).sqrt()
}

/// Full-substitution cycle time of the imperfect-quality model as printed.
/// It keeps item-2 holding terms although no item-2 stock exists.
pub fn eoqiss_full_cycle(params: &SystemParams) -> f64 {
    let (i1, i2) = (&params.item1, &params.item2);
    let (p1, p2) = (i1.defect_fraction_mean, i2.defect_fraction_mean);
    let (x1, x2) = (i1.screening_rate, i2.screening_rate);
    let q1 = (1.0 - p1).powi(2);
    let q2 = (1.0 - p2).powi(2);
    let (h1, h2) = (i1.holding_cost, i2.holding_cost);
    let (d1, d2) = (i1.demand_rate, i2.demand_rate);
    let num = 2.0 * params.ordering_cost * x1 * x2 * q1 * q2;
    let den = x1 * q1 * ((h1 * d1 + h2 * d2) * q2 + 2.0 * h2 * d2 * p2) + 2.0 * x2 * h1 * d1 * d1 * p1 * q2;
    (num / den).sqrt()
}

/// No-substitution cycle time of the imperfect-quality model as printed; the
/// same expression seeds the solution algorithm as `T0`.
pub fn eoqiss_none_cycle(params: &SystemParams) -> f64 {
    let i1 = &params.item1;
    let s = params.total_demand();
    let (p1, x1) = (i1.defect_fraction_mean, i1.screening_rate);
    let den = i1.holding_cost * s * (s * p1 + x1 * (1.0 - p1).powi(2) / 2.0);
    (2.0 * params.ordering_cost * x1 / den).sqrt()
}

/// Run-out time from the τ-stationarity condition as printed. The item-2
/// screening term lacks a factor `D2`, inherited from the printed cost.
pub fn eoqiss_runout(params: &SystemParams, cycle_time: f64) -> f64 {
    let (i1, i2) = (&params.item1, &params.item2);
    let (p1, p2) = (i1.defect_fraction_mean, i2.defect_fraction_mean);
    let (x1, x2) = (i1.screening_rate, i2.screening_rate);
    let (h1, h2) = (i1.holding_cost, i2.holding_cost);
    let q1 = (1.0 - p1).powi(2);
    let q2 = (1.0 - p2).powi(2);
    let ct = params.transfer_cost;
    let d2 = i2.demand_rate;
    let num = 2.0 * q2 * (0.5 * ct * q1 * x1 + cycle_time * h1 * p1 * params.total_demand()) * x2;
    let den = (q2 * (h2 - h1) * x2 + 2.0 * h2 * p2) * q1 * x1 + 2.0 * h1 * x2 * d2 * p1 * q2;
    num / den
}

/// Average cost with the item-2 defective-holding term exactly as printed,
/// `E[p2] D2 τ² / ((1 - E[p2])² x2 T)`. It is dimensionally a time, not a
/// unit-time, and disagrees with the integrated trajectory.
pub fn tac_eoqiss(params: &SystemParams, policy: Policy) -> Result<CostBreakdown, ModelError> {
    let exact = crate::model::tac_eoqiss(params, policy)?;
    let Policy {
        runout_time: tau,
        cycle_time: t,
    } = policy;
    let i2 = &params.item2;
    let w2 = i2.defect_weight();
    let holding2 = i2.holding_cost * (i2.demand_rate * tau * tau / (2.0 * t) + w2 * i2.demand_rate * tau * tau / t);
    Ok(CostBreakdown::from_parts(
        exact.ordering,
        exact.holding1,
        holding2,
        exact.transfer,
    ))
}

/// The unnumbered no-substitution average cost as printed: both demands
/// pooled under the item-1 holding cost and a transfer charge retained.
pub fn eoqiss_none_tac(params: &SystemParams, cycle_time: f64) -> f64 {
    let i1 = &params.item1;
    let s = params.total_demand();
    let t = cycle_time;
    i1.holding_cost * (0.5 * s * t + t * s * s * i1.defect_weight())
        + params.ordering_cost / t
        + params.item2.demand_rate * params.transfer_cost
}
