use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::model::{lot_plan, screening_epochs, CostBreakdown, LotPlan, Policy, ScreeningEpochs, SystemParams};

/// Linear stretch of an inventory level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySegment {
    pub t_start: f64,
    pub t_end: f64,
    pub level_start: f64,
    /// Units per year; negative while stock is consumed.
    pub slope: f64,
    /// Instantaneous change at `t_end` (removal of screened-out units).
    pub jump_at_end: f64,
}

impl TrajectorySegment {
    /// Level just before the jump at `t_end`.
    pub fn level_end(&self) -> f64 {
        self.level_start + self.slope * (self.t_end - self.t_start)
    }

    /// Unit-years held over the segment; exact for a linear level.
    pub fn area(&self) -> f64 {
        0.5 * (self.level_start + self.level_end()) * (self.t_end - self.t_start)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleTrace {
    pub item1_segments: Vec<TrajectorySegment>,
    pub item2_segments: Vec<TrajectorySegment>,
    pub epochs: ScreeningEpochs,
    pub lots: LotPlan,
}

impl CycleTrace {
    pub fn item1_area(&self) -> f64 {
        self.item1_segments.iter().map(TrajectorySegment::area).sum()
    }

    pub fn item2_area(&self) -> f64 {
        self.item2_segments.iter().map(TrajectorySegment::area).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulatedCycle {
    pub policy: Policy,
    pub trace: CycleTrace,
    pub per_cycle: CostBreakdown,
}

impl SimulatedCycle {
    /// Cost per year.
    pub fn average(&self) -> CostBreakdown {
        self.per_cycle.per(self.policy.cycle_time)
    }
}

// Relative slack for level and terminal checks.
const LEVEL_TOLERANCE: f64 = 1e-9;

/// One item's piecewise-linear inventory: starts at `lot`, follows `slope_at`
/// between event times, loses `removal` units at `screen_end`, and must hit
/// zero at `horizon`.
struct ItemRun {
    item: &'static str,
    lot: f64,
    removal: f64,
    screen_end: f64,
    horizon: f64,
    /// Time at which the consumption rate switches from `slopes.0` to `slopes.1`.
    switch: f64,
    slopes: (f64, f64),
}

impl ItemRun {
    fn trace(&self) -> Result<Vec<TrajectorySegment>, OracleError> {
        if self.horizon <= 0.0 {
            return Ok(Vec::new());
        }
        if self.screen_end >= self.horizon {
            return Err(OracleError::InfeasiblePolicy(format!(
                "{} finishes screening at {} but its stock runs out at {}",
                self.item, self.screen_end, self.horizon
            )));
        }
        let mut events = vec![0.0, self.screen_end, self.switch, self.horizon];
        events.retain(|t| (0.0..=self.horizon).contains(t));
        events.sort_by(f64::total_cmp);
        events.dedup();

        let scale = self.lot.max(f64::MIN_POSITIVE);
        let mut level = self.lot;
        let mut segments = Vec::with_capacity(events.len());
        for w in events.windows(2) {
            let (start, end) = (w[0], w[1]);
            let slope = if start < self.switch {
                self.slopes.0
            } else {
                self.slopes.1
            };
            let jump = if end == self.screen_end { -self.removal } else { 0.0 };
            let seg = TrajectorySegment {
                t_start: start,
                t_end: end,
                level_start: level,
                slope,
                jump_at_end: jump,
            };
            let before = seg.level_end();
            level = before + jump;
            if before < -LEVEL_TOLERANCE * scale || (end < self.horizon && level < -LEVEL_TOLERANCE * scale) {
                return Err(OracleError::InfeasiblePolicy(format!(
                    "{} inventory goes negative ({level}) at t = {end}",
                    self.item
                )));
            }
            segments.push(seg);
        }
        if level.abs() > LEVEL_TOLERANCE * scale {
            return Err(OracleError::InfeasiblePolicy(format!(
                "{} inventory ends the cycle at {level}, not 0",
                self.item
            )));
        }
        Ok(segments)
    }
}

/// Rebuilds both inventory trajectories of one cycle and integrates the
/// costs over them.
///
/// Item 2 is consumed at `D2` until τ; item 1 at `D1` until τ and at
/// `D1 + D2` afterwards. Each lot loses its expected defective share when
/// screening completes at `y_i / x_i`.
pub fn simulate_cycle(params: &SystemParams, policy: Policy) -> Result<SimulatedCycle, OracleError> {
    policy.check()?;
    let Policy {
        runout_time: tau,
        cycle_time: t,
    } = policy;
    let lots = lot_plan(params, policy)?;
    let epochs = screening_epochs(params, &lots);
    let (i1, i2) = (&params.item1, &params.item2);

    let item2 = ItemRun {
        item: "item 2",
        lot: lots.lot2,
        removal: i2.defect_fraction_mean * lots.lot2,
        screen_end: epochs.ts2,
        horizon: tau,
        switch: tau,
        slopes: (-i2.demand_rate, -i2.demand_rate),
    }
    .trace()?;
    let item1 = ItemRun {
        item: "item 1",
        lot: lots.lot1,
        removal: i1.defect_fraction_mean * lots.lot1,
        screen_end: epochs.ts1,
        horizon: t,
        switch: tau,
        slopes: (-i1.demand_rate, -(i1.demand_rate + i2.demand_rate)),
    }
    .trace()?;

    let trace = CycleTrace {
        item1_segments: item1,
        item2_segments: item2,
        epochs,
        lots,
    };
    let per_cycle = CostBreakdown::from_parts(
        params.ordering_cost,
        i1.holding_cost * trace.item1_area(),
        i2.holding_cost * trace.item2_area(),
        params.transfer_cost * i2.demand_rate * (t - tau),
    );
    Ok(SimulatedCycle {
        policy,
        trace,
        per_cycle,
    })
}
