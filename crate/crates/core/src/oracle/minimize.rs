use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::model::{Policy, SystemParams};

/// Box over (τ, T) searched by [`minimize_2d`]. Only points with `τ <= T` are
/// feasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    pub tau_range: (f64, f64),
    pub cycle_range: (f64, f64),
    /// Grid points per axis for the coarse scan.
    pub coarse_resolution: usize,
    /// Years.
    pub refine_tolerance: f64,
}

impl SearchRegion {
    /// τ in `[0, 3 τ_seed + 1]` and T in `[0.05 T0, 4 T0]`, where `τ_seed` is
    /// the perfect-quality run-out time and `T0` the printed
    /// no-substitution cycle.
    pub fn default_for(params: &SystemParams) -> Self {
        let tau_seed = params.transfer_cost / params.holding_gap();
        let t0 = crate::printed::eoqiss_none_cycle(params);
        Self {
            tau_range: (0.0, 3.0 * tau_seed + 1.0),
            cycle_range: (0.05 * t0, 4.0 * t0),
            coarse_resolution: 200,
            refine_tolerance: 1e-8,
        }
    }

    pub fn check(&self) -> Result<(), OracleError> {
        let (a, b) = self.tau_range;
        let (c, d) = self.cycle_range;
        let ordered = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ordered(a, b) || !ordered(c, d) {
            return Err(OracleError::Region("ranges must be finite with positive length".into()));
        }
        if a < 0.0 || c <= 0.0 {
            return Err(OracleError::Region(
                "τ range must start at 0 or later and T range above 0".into(),
            ));
        }
        if self.coarse_resolution < 16 {
            return Err(OracleError::Region(format!(
                "coarse resolution {} is below 16",
                self.coarse_resolution
            )));
        }
        if !(self.refine_tolerance.is_finite() && self.refine_tolerance > 0.0) {
            return Err(OracleError::Region("refine tolerance must be positive".into()));
        }
        if a > d {
            return Err(OracleError::Region(format!(
                "no feasible point: τ starts at {a} beyond the largest T {d}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Minimum {
    pub policy: Policy,
    pub value: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const MAX_SWEEPS: usize = 200;

/// Golden-section search for a minimum of `f` on `[lo, hi]`. Returns the best
/// point evaluated, endpoints included.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut best = [(lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
        for cand in [(c, fc), (d, fd)] {
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    best
}

/// Coarse grid scan of the feasible part of `region`, then alternating
/// golden-section line searches until a full sweep moves both coordinates by
/// less than the refine tolerance.
///
/// Each sweep searches along τ (T fixed), along T (τ fixed), and along the
/// ray through the origin (τ/T fixed); the last one lets the search slide
/// along the `τ = T` edge. Non-finite costs count as infeasible.
pub fn minimize_2d<F>(cost: F, region: &SearchRegion) -> Result<Minimum, OracleError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    region.check()?;
    let n = region.coarse_resolution;
    let axis = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let eval = |tau: f64, t: f64| {
        if tau > t || tau < region.tau_range.0 || t < region.cycle_range.0 {
            return f64::INFINITY;
        }
        let v = cost(tau, t);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| eval(axis(region.tau_range, k / n), axis(region.cycle_range, k % n)))
        .collect();
    let (k, &value) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    if !value.is_finite() {
        return Err(OracleError::Region("no grid point has a finite cost".into()));
    }

    let cell_tau = (region.tau_range.1 - region.tau_range.0) / (n - 1) as f64;
    let cell_t = (region.cycle_range.1 - region.cycle_range.0) / (n - 1) as f64;
    let tol = region.refine_tolerance;
    let (mut tau, mut t, mut best) = (axis(region.tau_range, k / n), axis(region.cycle_range, k % n), value);

    for _ in 0..MAX_SWEEPS {
        let (tau0, t0) = (tau, t);

        let lo = (tau - 2.0 * cell_tau).max(region.tau_range.0);
        let hi = (tau + 2.0 * cell_tau).min(region.tau_range.1).min(t);
        if hi > lo {
            let (x, v) = golden_section(|x| eval(x, t), lo, hi, tol);
            if v < best {
                (tau, best) = (x, v);
            }
        }

        let lo = (t - 2.0 * cell_t).max(region.cycle_range.0).max(tau);
        let hi = (t + 2.0 * cell_t).min(region.cycle_range.1);
        if hi > lo {
            let (x, v) = golden_section(|x| eval(tau, x), lo, hi, tol);
            if v < best {
                (t, best) = (x, v);
            }
        }

        if tau > 0.0 {
            let ratio = tau / t;
            let lo = (t - 2.0 * cell_t).max(region.cycle_range.0);
            let hi = (t + 2.0 * cell_t)
                .min(region.cycle_range.1)
                .min(region.tau_range.1 / ratio);
            if hi > lo {
                let (x, v) = golden_section(|x| eval((ratio * x).min(x), x), lo, hi, tol);
                if v < best {
                    (tau, t, best) = ((ratio * x).min(x), x, v);
                }
            }
        }

        if (tau - tau0).abs() < tol && (t - t0).abs() < tol {
            break;
        }
    }

    Ok(Minimum {
        policy: Policy {
            runout_time: tau,
            cycle_time: t,
        },
        value: best,
    })
}

/// Grid scan plus golden-section refinement of a one-dimensional cost over
/// the cycle-time range.
pub fn minimize_1d<F>(cost: F, range: (f64, f64), resolution: usize, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let n = resolution.max(2);
    let step = (range.1 - range.0) / (n - 1) as f64;
    let (i, _) = (0..n)
        .map(|i| (i, cost(range.0 + step * i as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    let centre = range.0 + step * i as f64;
    golden_section(&cost, (centre - step).max(range.0), (centre + step).min(range.1), tol)
}
