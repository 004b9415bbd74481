use serde::{Deserialize, Serialize};

use super::SolveError;
use crate::model::{Policy, SystemParams};

/// `sqrt(2 c_o (c_h2 - c_h1) / D2)`: below this transfer cost the
/// perfect-quality cost has a unique interior optimum.
pub fn transfer_cost_bound(params: &SystemParams) -> f64 {
    (2.0 * params.ordering_cost * params.holding_gap() / params.item2.demand_rate).sqrt()
}

pub fn basic_convexity_holds(params: &SystemParams) -> bool {
    params.transfer_cost < transfer_cost_bound(params)
}

/// Sufficient condition for a unique optimum of the imperfect-quality cost,
/// evaluated as stated: `c_o > c_t² / (2 (c_h2 - c_h1)) + τ (T - 1) c_t D2`.
///
/// The `T - 1` term mixes a time with a pure number, so the outcome depends
/// on the time unit.
pub fn eoqiss_convexity_holds(params: &SystemParams, policy: Policy) -> bool {
    let ct = params.transfer_cost;
    let rhs = ct * ct / (2.0 * params.holding_gap())
        + policy.runout_time * (policy.cycle_time - 1.0) * ct * params.item2.demand_rate;
    params.ordering_cost > rhs
}

/// Analytic Hessian determinant of the perfect-quality cost on the ridge
/// `τ = c_t / (c_h2 - c_h1)`, where the mixed partial vanishes:
/// `2 D2 / T⁴ · (c_o (c_h2 - c_h1) - D2 c_t² / 2)`.
pub fn basic_hessian_determinant(params: &SystemParams, cycle_time: f64) -> f64 {
    let d2 = params.item2.demand_rate;
    let ct = params.transfer_cost;
    2.0 * d2 / cycle_time.powi(4) * (params.ordering_cost * params.holding_gap() - 0.5 * d2 * ct * ct)
}

/// Second partials of a cost surface over (τ, T); index 0 is τ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hessian2 {
    pub matrix: [[f64; 2]; 2],
}

impl Hessian2 {
    pub fn determinant(&self) -> f64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Leading principal minors positive.
    pub fn positive_definite(&self) -> bool {
        self.matrix[0][0] > 0.0 && self.determinant() > 0.0
    }
}

/// Central-difference Hessian of `cost` at an interior policy. `step` is
/// relative to each coordinate.
pub fn hessian<F>(cost: F, policy: Policy, step: f64) -> Result<Hessian2, SolveError>
where
    F: Fn(f64, f64) -> f64,
{
    policy.check()?;
    let x = [policy.runout_time, policy.cycle_time];
    if x[0] <= 0.0 || x[0] >= x[1] {
        return Err(SolveError::Infeasible(format!(
            "Hessian needs an interior policy, got τ = {}, T = {}",
            x[0], x[1]
        )));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(SolveError::NumericalStep(step));
    }
    let h = [step * x[0], step * x[1]];
    for i in 0..2 {
        if x[i] + h[i] == x[i] || x[i] - h[i] == x[i] {
            return Err(SolveError::NumericalStep(step));
        }
    }

    let f = |d0: f64, d1: f64| cost(x[0] + d0 * h[0], x[1] + d1 * h[1]);
    let f0 = f(0.0, 0.0);
    let d00 = (f(1.0, 0.0) - 2.0 * f0 + f(-1.0, 0.0)) / (h[0] * h[0]);
    let d11 = (f(0.0, 1.0) - 2.0 * f0 + f(0.0, -1.0)) / (h[1] * h[1]);
    let d01 = (f(1.0, 1.0) - f(1.0, -1.0) - f(-1.0, 1.0) + f(-1.0, -1.0)) / (4.0 * h[0] * h[1]);
    let matrix = [[d00, d01], [d01, d11]];
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(SolveError::NumericalStep(step));
    }
    Ok(Hessian2 { matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tac_basic;

    fn params_with_transfer(ct: f64) -> SystemParams {
        let mut p = SystemParams::reference();
        p.transfer_cost = ct;
        p
    }

    #[test]
    fn bound_at_reference() {
        // 2 * 4500 * 4 / 1000 = 36
        assert_eq!(transfer_cost_bound(&SystemParams::reference()), 6.0);
        assert!(basic_convexity_holds(&params_with_transfer(1.0)));
        assert!(!basic_convexity_holds(&params_with_transfer(6.0)));
        assert!(basic_convexity_holds(&params_with_transfer(0.0)));
    }

    #[test]
    fn eoqiss_condition() {
        let zero = params_with_transfer(0.0);
        assert!(eoqiss_convexity_holds(&zero, Policy::new(3.0, 40.0).unwrap()));
        // 0.125 + 0.25 * 1.09 * 1000 = 272.625 < 4500
        let p = SystemParams::reference();
        assert!(eoqiss_convexity_holds(&p, Policy::new(0.25, 2.09).unwrap()));
        // at T = 1 only c_t² / (2 Δ) remains
        let mut q = params_with_transfer(6.0);
        q.ordering_cost = 4.5; // 36 / 8
        assert!(!eoqiss_convexity_holds(&q, Policy::new(0.7, 1.0).unwrap()));
        q.ordering_cost = 4.5 + 1e-9;
        assert!(eoqiss_convexity_holds(&q, Policy::new(0.7, 1.0).unwrap()));
    }

    #[test]
    fn quadratic_has_identity_scaled_hessian() {
        let h = hessian(
            |a, b| (a - 1.0).powi(2) + (b - 2.0).powi(2),
            Policy::new(1.0, 2.0).unwrap(),
            1e-3,
        )
        .unwrap();
        for (i, row) in h.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 2.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-6, "H[{i}][{j}] = {v}");
            }
        }
        assert!(h.positive_definite());
    }

    #[test]
    fn basic_hessian_matches_analytic_form_on_ridge() {
        for ct in [0.5, 1.0, 3.0, 7.0] {
            let p = params_with_transfer(ct);
            let tau = ct / p.holding_gap();
            let t = tau + 2.0;
            let cost = |a: f64, b: f64| {
                tac_basic(
                    &p,
                    Policy {
                        runout_time: a,
                        cycle_time: b,
                    },
                )
                .unwrap()
                .total
            };
            let h = hessian(cost, Policy::new(tau, t).unwrap(), 1e-4).unwrap();
            let want = basic_hessian_determinant(&p, t);
            assert!(
                (h.determinant() - want).abs() < 1e-5 * want.abs(),
                "ct={ct}: {} vs {want}",
                h.determinant()
            );
            assert!(h.matrix[0][1].abs() < 1e-4);
        }
    }

    #[test]
    fn degenerate_steps_are_rejected() {
        let q = |a: f64, b: f64| a * a + b * b;
        let p = Policy::new(0.5, 1.0).unwrap();
        assert!(matches!(hessian(q, p, 1e-300), Err(SolveError::NumericalStep(_))));
        assert!(matches!(hessian(q, p, 0.0), Err(SolveError::NumericalStep(_))));
        assert!(hessian(q, Policy::new(0.0, 1.0).unwrap(), 1e-4).is_err());
    }
}
