#![allow(dead_code)]

use eoq_subst::solvers::transfer_cost_bound;
use eoq_subst::{validate, ItemParams, SystemParams};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Valid parameters with a feasible partial-substitution optimum. Screening
/// rates are large enough for screening to end before either stock runs out.
pub fn sample_params(rng: &mut impl Rng, defects: bool) -> SystemParams {
    loop {
        let d1 = rng.gen_range(200.0..5000.0);
        let d2 = rng.gen_range(200.0..5000.0);
        let h1 = rng.gen_range(0.5..3.0);
        let h2 = h1 + rng.gen_range(0.5..5.0);
        let s = d1 + d2;
        let (p1, p2) = if defects {
            (rng.gen_range(0.0..0.2), rng.gen_range(0.0..0.2))
        } else {
            (0.0, 0.0)
        };
        let mut p = SystemParams {
            item1: ItemParams::new(d1, h1, s * rng.gen_range(5.0..200.0), p1),
            item2: ItemParams::new(d2, h2, s * rng.gen_range(5.0..200.0), p2),
            ordering_cost: rng.gen_range(500.0..10000.0),
            transfer_cost: 0.0,
        };
        p.transfer_cost = transfer_cost_bound(&p) * rng.gen_range(0.05..0.9);
        if validate(&p).is_empty() {
            return p;
        }
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
