mod common;

use common::rel;
use eoq_subst::sensitivity::{Axis, RowStatus};
use eoq_subst::{
    qualitative_checks, run_sweep, solve, FixedPointSettings, Formulas, Model, ParamKey, Regime, SweepSpec,
    SystemParams,
};

fn regimes() -> [Regime; 4] {
    [Regime::Partial, Regime::Full, Regime::NoSubstitution, Regime::Auto]
}

#[test]
fn every_row_equals_a_fresh_solve() {
    let spec = SweepSpec::new(SystemParams::reference().with_defects(0.02, 0.02), Model::Eoqiss)
        .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0, 4.0, 5.0]))
        .axis(Axis::single(ParamKey::Ct, &[0.5, 1.0, 8.0]))
        .regimes(&regimes());
    for row in run_sweep(&spec, false).unwrap() {
        let fresh = solve(
            &row.params,
            Model::Eoqiss,
            row.regime,
            &FixedPointSettings::default(),
            Formulas::Derived,
        );
        match fresh {
            Ok(rep) => {
                assert_eq!(row.status, RowStatus::Ok);
                assert_eq!(row.tac, Some(rep.cost.total));
                assert_eq!(row.cycle_time, Some(rep.policy.cycle_time));
                assert_eq!(row.runout_time, Some(rep.policy.runout_time));
                assert_eq!(row.mode, Some(rep.mode));
            }
            Err(_) => assert_ne!(row.status, RowStatus::Ok),
        }
    }
}

#[test]
fn defect_free_grid_matches_the_perfect_quality_grid() {
    let build = |model| {
        SweepSpec::new(SystemParams::reference(), model)
            .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0, 4.0, 5.0]))
            .axis(Axis::joint(&[ParamKey::Ep1, ParamKey::Ep2], &[&[0.0, 0.0]]))
            .regimes(&regimes())
    };
    let a = run_sweep(&build(Model::Basic), false).unwrap();
    let b = run_sweep(&build(Model::Eoqiss), false).unwrap();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.mode, y.mode);
        for (u, v) in [
            (x.runout_time, y.runout_time),
            (x.cycle_time, y.cycle_time),
            (x.lot1, y.lot1),
            (x.lot2, y.lot2),
            (x.tac, y.tac),
        ] {
            assert!(rel(u.unwrap(), v.unwrap()) < 1e-9);
        }
    }
}

#[test]
fn item1_defects_raise_the_item1_lot_in_every_regime() {
    let spec = SweepSpec::new(SystemParams::reference(), Model::Eoqiss)
        .axis(Axis::single(ParamKey::Ep1, &[0.0, 0.05, 0.10]))
        .regimes(&[Regime::Partial, Regime::Full, Regime::NoSubstitution]);
    let rows = run_sweep(&spec, false).unwrap();
    let findings = qualitative_checks(&rows).unwrap();
    for claim in [
        "lot1_increasing_in_ep1",
        "full_tac_increasing_in_ep1",
        "full_tac_most_sensitive_to_ep1",
    ] {
        let f = findings.iter().find(|f| f.claim == claim).unwrap();
        assert!(f.passed && !f.vacuous, "{f:?}");
    }
}
