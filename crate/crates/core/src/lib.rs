//! Optimal two-product inventory policies under one-way, stockout-based
//! substitution, with and without imperfect-quality items.
//!
//! Item 1 is the major (substituting) product and item 2 the minor
//! (substituted) one. A policy is the pair (run-out time `τ`, cycle time `T`):
//! item 2 is sold from its own stock until `τ`, after which its demand is
//! served by converting item 1 at a per-unit transfer cost.
//!
//! - [`model`] holds the parameter types, validation and the cost functions.
//! - [`solvers`] holds the closed-form and fixed-point optima for every regime.
//! - [`oracle`] rebuilds inventory trajectories and minimizes cost surfaces
//!   numerically, independently of the closed forms.
//! - [`sensitivity`] runs parameter sweeps and directional checks.
//! - [`printed`] keeps the as-published formulas that disagree with the
//!   derivation, for side-by-side reproduction.

pub mod model;
pub mod oracle;
pub mod printed;
pub mod sensitivity;
pub mod solvers;

pub use model::{
    lot_plan, screening_epochs, tac_basic, tac_eoqiss, tc_eoqiss, validate, validate_basic, CostBreakdown, ItemParams,
    LotPlan, Model, ModelError, Policy, Rule, ScreeningEpochs, SystemParams, Violation,
};
pub use oracle::{
    minimize_2d, simulate_cycle, verify, CycleTrace, Minimum, OracleError, SearchRegion, SimulatedCycle,
    TrajectorySegment, Verification,
};
pub use sensitivity::{qualitative_checks, run_sweep, Finding, ParamKey, SweepRow, SweepSpec};
pub use solvers::{solve, FixedPointSettings, Formulas, Regime, SolveError, SolveReport, SubstitutionMode};
