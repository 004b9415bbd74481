//! Parameter sweeps over the solvers and directional checks on their output.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Model, SystemParams};
use crate::oracle::{verify, SearchRegion};
use crate::solvers::{solve, FixedPointSettings, Formulas, Regime, SolveError, SubstitutionMode};

/// Names of the scalar inputs of [`SystemParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKey {
    D1,
    D2,
    Ch1,
    Ch2,
    X1,
    X2,
    Ep1,
    Ep2,
    Co,
    Ct,
}

impl ParamKey {
    pub const ALL: [ParamKey; 10] = [
        ParamKey::D1,
        ParamKey::D2,
        ParamKey::Ch1,
        ParamKey::Ch2,
        ParamKey::X1,
        ParamKey::X2,
        ParamKey::Ep1,
        ParamKey::Ep2,
        ParamKey::Co,
        ParamKey::Ct,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamKey::D1 => "d1",
            ParamKey::D2 => "d2",
            ParamKey::Ch1 => "ch1",
            ParamKey::Ch2 => "ch2",
            ParamKey::X1 => "x1",
            ParamKey::X2 => "x2",
            ParamKey::Ep1 => "ep1",
            ParamKey::Ep2 => "ep2",
            ParamKey::Co => "co",
            ParamKey::Ct => "ct",
        }
    }

    pub fn get(self, p: &SystemParams) -> f64 {
        *self.field(&mut p.clone())
    }

    pub fn set(self, p: &mut SystemParams, value: f64) {
        *self.field(p) = value;
    }

    fn field(self, p: &mut SystemParams) -> &mut f64 {
        match self {
            ParamKey::D1 => &mut p.item1.demand_rate,
            ParamKey::D2 => &mut p.item2.demand_rate,
            ParamKey::Ch1 => &mut p.item1.holding_cost,
            ParamKey::Ch2 => &mut p.item2.holding_cost,
            ParamKey::X1 => &mut p.item1.screening_rate,
            ParamKey::X2 => &mut p.item2.screening_rate,
            ParamKey::Ep1 => &mut p.item1.defect_fraction_mean,
            ParamKey::Ep2 => &mut p.item2.defect_fraction_mean,
            ParamKey::Co => &mut p.ordering_cost,
            ParamKey::Ct => &mut p.transfer_cost,
        }
    }
}

impl fmt::Display for ParamKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ParamKey::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown parameter `{s}`"))
    }
}

/// One sweep dimension. A joint axis sets several parameters together, one
/// tuple per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxisRepr", into = "AxisRepr")]
pub struct Axis {
    pub keys: Vec<ParamKey>,
    pub points: Vec<Vec<f64>>,
}

impl Axis {
    pub fn single(key: ParamKey, values: &[f64]) -> Self {
        Self {
            keys: vec![key],
            points: values.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn joint(keys: &[ParamKey], points: &[&[f64]]) -> Self {
        Self {
            keys: keys.to_vec(),
            points: points.iter().map(|p| p.to_vec()).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum AxisRepr {
    Single { key: ParamKey, values: Vec<f64> },
    Joint { keys: Vec<ParamKey>, values: Vec<Vec<f64>> },
}

impl TryFrom<AxisRepr> for Axis {
    type Error = String;

    fn try_from(repr: AxisRepr) -> Result<Self, Self::Error> {
        let axis = match repr {
            AxisRepr::Single { key, values } => Axis::single(key, &values),
            AxisRepr::Joint { keys, values } => Axis { keys, points: values },
        };
        if let Some(bad) = axis.points.iter().find(|p| p.len() != axis.keys.len()) {
            return Err(format!("axis point {bad:?} does not match keys {:?}", axis.keys));
        }
        Ok(axis)
    }
}

impl From<Axis> for AxisRepr {
    fn from(axis: Axis) -> Self {
        if axis.keys.len() == 1 {
            AxisRepr::Single {
                key: axis.keys[0],
                values: axis.points.into_iter().map(|p| p[0]).collect(),
            }
        } else {
            AxisRepr::Joint {
                keys: axis.keys,
                values: axis.points,
            }
        }
    }
}

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub regimes: Vec<Regime>,
    pub model: Model,
    /// Upper bound on the number of rows.
    pub cap: usize,
    pub settings: FixedPointSettings,
    pub formulas: Formulas,
}

impl SweepSpec {
    pub fn new(base: SystemParams, model: Model) -> Self {
        Self {
            base,
            axes: Vec::new(),
            regimes: vec![Regime::Auto],
            model,
            cap: DEFAULT_CAP,
            settings: FixedPointSettings::default(),
            formulas: Formulas::Derived,
        }
    }

    pub fn axis(mut self, axis: Axis) -> Self {
        self.axes.push(axis);
        self
    }

    pub fn regimes(mut self, regimes: &[Regime]) -> Self {
        self.regimes = regimes.to_vec();
        self
    }

    /// Number of rows the sweep would produce, saturating on overflow.
    pub fn size(&self) -> usize {
        self.axes
            .iter()
            .map(|a| a.points.len())
            .chain([self.regimes.len()])
            .fold(1usize, |acc, n| acc.saturating_mul(n))
    }

    pub fn check(&self) -> Result<(), SweepError> {
        if self.regimes.is_empty() {
            return Err(SweepError::Spec("at least one regime is required".into()));
        }
        let mut seen = Vec::new();
        for axis in &self.axes {
            if axis.keys.is_empty() || axis.points.is_empty() {
                return Err(SweepError::Spec(
                    "every axis needs at least one key and one value".into(),
                ));
            }
            if axis.points.iter().any(|p| p.len() != axis.keys.len()) {
                return Err(SweepError::Spec(format!(
                    "axis {:?} has points of the wrong width",
                    axis.keys
                )));
            }
            for key in &axis.keys {
                if seen.contains(key) {
                    return Err(SweepError::Spec(format!(
                        "parameter {key} appears on more than one axis"
                    )));
                }
                seen.push(*key);
            }
        }
        self.settings.check().map_err(|e| SweepError::Spec(e.to_string()))?;
        let size = self.size();
        if size > self.cap {
            return Err(SweepError::TooLarge { size, cap: self.cap });
        }
        Ok(())
    }

    fn points(&self) -> Vec<Vec<(ParamKey, f64)>> {
        let mut points = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.points.iter().map(move |values| {
                        let mut p = prefix.clone();
                        p.extend(axis.keys.iter().copied().zip(values.iter().copied()));
                        p
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Spec(String),
    #[error("sweep would produce {size} rows, above the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("qualitative checks need rows varying along a single axis: {0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    /// Parameters violate a model assumption.
    Invalid,
    /// The solver reported infeasibility or did not converge.
    Failed,
    /// Solved, but the oracle disagreed.
    Unverified,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::Invalid => "invalid",
            RowStatus::Failed => "failed",
            RowStatus::Unverified => "unverified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisValue {
    pub key: ParamKey,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// One entry per swept parameter, in axis order.
    pub values: Vec<AxisValue>,
    pub regime: Regime,
    pub status: RowStatus,
    pub message: Option<String>,
    pub mode: Option<SubstitutionMode>,
    pub runout_time: Option<f64>,
    pub cycle_time: Option<f64>,
    pub lot1: Option<f64>,
    pub lot2: Option<f64>,
    pub tac: Option<f64>,
    pub basic_convexity: Option<bool>,
    pub eoqiss_convexity: Option<bool>,
    pub oracle_residual: Option<f64>,
    /// Full parameter set the row was solved with.
    pub params: SystemParams,
}

impl SweepRow {
    fn empty(values: Vec<AxisValue>, regime: Regime, params: SystemParams, status: RowStatus, message: String) -> Self {
        Self {
            values,
            regime,
            status,
            message: Some(message),
            mode: None,
            runout_time: None,
            cycle_time: None,
            lot1: None,
            lot2: None,
            tac: None,
            basic_convexity: None,
            eoqiss_convexity: None,
            oracle_residual: None,
            params,
        }
    }
}

/// Solves every point of the cross product of the axes for every regime.
/// Rows come out in lexicographic axis order (first axis outermost, regimes
/// innermost) whatever the execution order.
pub fn run_sweep(spec: &SweepSpec, verify_each: bool) -> Result<Vec<SweepRow>, SweepError> {
    spec.check()?;
    let jobs: Vec<_> = spec
        .points()
        .into_iter()
        .flat_map(|point| spec.regimes.iter().map(move |&r| (point.clone(), r)))
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(point, regime)| solve_row(spec, &point, regime, verify_each))
        .collect())
}

fn solve_row(spec: &SweepSpec, point: &[(ParamKey, f64)], regime: Regime, verify_each: bool) -> SweepRow {
    let mut params = spec.base;
    for &(key, value) in point {
        key.set(&mut params, value);
    }
    let values = point.iter().map(|&(key, value)| AxisValue { key, value }).collect();
    let report = match solve(&params, spec.model, regime, &spec.settings, spec.formulas) {
        Ok(r) => r,
        Err(SolveError::Invalid(v)) => {
            let msg = v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            return SweepRow::empty(values, regime, params, RowStatus::Invalid, msg);
        }
        Err(e) => return SweepRow::empty(values, regime, params, RowStatus::Failed, e.to_string()),
    };
    let (status, message, residual) = if verify_each {
        match verify(&report, &params, &SearchRegion::default_for(&params)) {
            Ok(v) => (RowStatus::Ok, None, v.report.oracle_residual),
            Err(e) => (RowStatus::Unverified, Some(e.to_string()), None),
        }
    } else {
        (RowStatus::Ok, None, None)
    };
    SweepRow {
        values,
        regime,
        status,
        message,
        mode: Some(report.mode),
        runout_time: Some(report.policy.runout_time),
        cycle_time: Some(report.policy.cycle_time),
        lot1: Some(report.lots.lot1),
        lot2: Some(report.lots.lot2),
        tac: Some(report.cost.total),
        basic_convexity: report.basic_convexity,
        eoqiss_convexity: report.eoqiss_convexity,
        oracle_residual: residual,
        params,
    }
}

/// Outcome of one directional claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub claim: String,
    pub description: String,
    pub passed: bool,
    /// No pair of rows was comparable; the claim passes trivially.
    pub vacuous: bool,
    /// Row indices supporting the verdict: the offending pair on failure,
    /// every compared row on success.
    pub witnesses: Vec<usize>,
}

/// Evaluates the directional claims about defect fractions and item-2
/// holding cost as monotonicity predicates over `rows`.
///
/// The rows must vary along one sweep axis: either the item-2 holding cost
/// alone, or the expected defect fractions (alone or as a joint pair).
/// Comparisons are made between rows whose claim parameter differs strictly.
pub fn qualitative_checks(rows: &[SweepRow]) -> Result<Vec<Finding>, SweepError> {
    let varying: Vec<ParamKey> = ParamKey::ALL
        .into_iter()
        .filter(|k| rows.iter().any(|r| k.get(&r.params) != k.get(&rows[0].params)))
        .collect();
    let defect_axis = varying.iter().all(|k| matches!(k, ParamKey::Ep1 | ParamKey::Ep2));
    if !(defect_axis || varying == [ParamKey::Ch2]) {
        let names: Vec<_> = varying.iter().map(|k| k.as_str()).collect();
        return Err(SweepError::Usage(format!("rows vary in {}", names.join(", "))));
    }

    let solved: Vec<(usize, &SweepRow)> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r.status, RowStatus::Ok | RowStatus::Unverified) && r.tac.is_some())
        .collect();
    let in_mode = |mode: SubstitutionMode| -> Vec<(usize, &SweepRow)> {
        solved.iter().copied().filter(|(_, r)| r.mode == Some(mode)).collect()
    };
    let all_modes = [
        SubstitutionMode::Partial,
        SubstitutionMode::Full,
        SubstitutionMode::NoSubstitution,
    ];

    let mut findings = Vec::new();
    findings.push(monotone(
        "partial_lot2_nonincreasing_in_ep2",
        "under partial substitution the item-2 lot does not grow with its expected defect fraction",
        &in_mode(SubstitutionMode::Partial),
        ParamKey::Ep2,
        |r| r.lot2,
        |lo, hi| hi <= lo,
    ));
    let mut lot1 = Vec::new();
    for mode in all_modes {
        lot1.push(monotone(
            "",
            "",
            &in_mode(mode),
            ParamKey::Ep1,
            |r| r.lot1,
            |lo, hi| hi > lo,
        ));
    }
    findings.push(merge(
        "lot1_increasing_in_ep1",
        "in every regime the item-1 lot grows with its expected defect fraction",
        lot1,
    ));
    findings.push(monotone(
        "full_tac_increasing_in_ep1",
        "under full substitution the average cost grows with the item-1 expected defect fraction",
        &in_mode(SubstitutionMode::Full),
        ParamKey::Ep1,
        |r| r.tac,
        |lo, hi| hi > lo,
    ));
    findings.push(full_most_sensitive(
        &in_mode(SubstitutionMode::Partial),
        &in_mode(SubstitutionMode::Full),
        &in_mode(SubstitutionMode::NoSubstitution),
    ));
    findings.push(monotone(
        "partial_lot1_increasing_in_ch2",
        "under partial substitution the item-1 lot grows with the item-2 holding cost",
        &in_mode(SubstitutionMode::Partial),
        ParamKey::Ch2,
        |r| r.lot1,
        |lo, hi| hi > lo,
    ));
    Ok(findings)
}

/// Checks `ok(metric(lo), metric(hi))` for every pair whose `key` value
/// increases from `lo` to `hi`.
fn monotone(
    claim: &str,
    description: &str,
    rows: &[(usize, &SweepRow)],
    key: ParamKey,
    metric: impl Fn(&SweepRow) -> Option<f64>,
    ok: impl Fn(f64, f64) -> bool,
) -> Finding {
    let mut witnesses = Vec::new();
    for &(i, a) in rows {
        for &(j, b) in rows {
            if key.get(&a.params) >= key.get(&b.params) {
                continue;
            }
            let (Some(lo), Some(hi)) = (metric(a), metric(b)) else {
                continue;
            };
            if !ok(lo, hi) {
                return Finding {
                    claim: claim.into(),
                    description: description.into(),
                    passed: false,
                    vacuous: false,
                    witnesses: vec![i, j],
                };
            }
            witnesses.extend([i, j]);
        }
    }
    witnesses.sort_unstable();
    witnesses.dedup();
    Finding {
        claim: claim.into(),
        description: description.into(),
        passed: true,
        vacuous: witnesses.is_empty(),
        witnesses,
    }
}

fn merge(claim: &str, description: &str, parts: Vec<Finding>) -> Finding {
    if let Some(failed) = parts.iter().find(|f| !f.passed) {
        return Finding {
            claim: claim.into(),
            description: description.into(),
            ..failed.clone()
        };
    }
    let mut witnesses: Vec<usize> = parts.iter().flat_map(|f| f.witnesses.iter().copied()).collect();
    witnesses.sort_unstable();
    witnesses.dedup();
    Finding {
        claim: claim.into(),
        description: description.into(),
        passed: true,
        vacuous: witnesses.is_empty(),
        witnesses,
    }
}

/// Relative cost change per unit of item-1 defect fraction, taken between
/// the pair of rows that differs least in every other parameter (ties go to
/// the widest spread in the defect fraction).
fn ep1_sensitivity(rows: &[(usize, &SweepRow)]) -> Option<(f64, [usize; 2])> {
    let mut best: Option<(f64, f64, [usize; 2], f64)> = None;
    for &(i, a) in rows {
        for &(j, b) in rows {
            let (lo, hi) = (ParamKey::Ep1.get(&a.params), ParamKey::Ep1.get(&b.params));
            if lo >= hi {
                continue;
            }
            let (Some(ta), Some(tb)) = (a.tac, b.tac) else { continue };
            let other: f64 = ParamKey::ALL
                .into_iter()
                .filter(|&k| k != ParamKey::Ep1)
                .map(|k| (k.get(&a.params) - k.get(&b.params)).abs())
                .sum();
            let spread = hi - lo;
            let better = match best {
                None => true,
                Some((o, s, _, _)) => other < o || (other == o && spread > s),
            };
            if better {
                best = Some((other, spread, [i, j], (tb - ta) / (ta * spread)));
            }
        }
    }
    best.map(|(_, _, pair, sens)| (sens, pair))
}

fn full_most_sensitive(
    partial: &[(usize, &SweepRow)],
    full: &[(usize, &SweepRow)],
    none: &[(usize, &SweepRow)],
) -> Finding {
    let claim = "full_tac_most_sensitive_to_ep1".to_string();
    let description =
        "the relative cost change per unit item-1 defect fraction is largest under full substitution".to_string();
    match (ep1_sensitivity(partial), ep1_sensitivity(full), ep1_sensitivity(none)) {
        (Some((sp, wp)), Some((sf, wf)), Some((sn, wn))) => {
            let mut witnesses: Vec<usize> = wp.into_iter().chain(wf).chain(wn).collect();
            witnesses.sort_unstable();
            Finding {
                claim,
                description: format!("{description} (partial {sp:.6e}, full {sf:.6e}, none {sn:.6e})"),
                passed: sf > sp && sf > sn,
                vacuous: false,
                witnesses,
            }
        }
        _ => Finding {
            claim,
            description,
            passed: true,
            vacuous: true,
            witnesses: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SystemParams {
        SystemParams::reference()
    }

    #[test]
    fn holding_cost_axis_gives_partial_rows() {
        let spec = SweepSpec::new(base(), Model::Basic).axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0, 4.0, 5.0]));
        let rows = run_sweep(&spec, false).unwrap();
        assert_eq!(rows.len(), 4);
        for (row, gap) in rows.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert_eq!(row.mode, Some(SubstitutionMode::Partial));
            assert_eq!(row.runout_time, Some(1.0 / gap));
        }
        let findings = qualitative_checks(&rows).unwrap();
        let ch2 = findings
            .iter()
            .find(|f| f.claim == "partial_lot1_increasing_in_ch2")
            .unwrap();
        assert!(ch2.passed && !ch2.vacuous);
    }

    #[test]
    fn empty_axes_give_the_base_solve() {
        let rows = run_sweep(&SweepSpec::new(base(), Model::Eoqiss), false).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].values.is_empty());
        let direct = crate::solvers::solve_eoqiss_auto(&base(), &FixedPointSettings::default()).unwrap();
        assert_eq!(rows[0].tac, Some(direct.cost.total));
    }

    #[test]
    fn lexicographic_order_and_regimes_innermost() {
        let spec = SweepSpec::new(base(), Model::Basic)
            .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0]))
            .axis(Axis::single(ParamKey::Ct, &[0.5, 1.0, 1.5]))
            .regimes(&[Regime::Full, Regime::Auto]);
        let rows = run_sweep(&spec, false).unwrap();
        assert_eq!(rows.len(), 12);
        let keys: Vec<(f64, f64, Regime)> = rows
            .iter()
            .map(|r| (r.values[0].value, r.values[1].value, r.regime))
            .collect();
        assert_eq!(keys[0], (2.0, 0.5, Regime::Full));
        assert_eq!(keys[1], (2.0, 0.5, Regime::Auto));
        assert_eq!(keys[2], (2.0, 1.0, Regime::Full));
        assert_eq!(keys[11], (3.0, 1.5, Regime::Auto));
    }

    #[test]
    fn invalid_points_are_flagged_not_dropped() {
        let spec = SweepSpec::new(base(), Model::Basic).axis(Axis::single(ParamKey::Ch2, &[0.5, 5.0]));
        let rows = run_sweep(&spec, false).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].status, RowStatus::Invalid);
        assert!(rows[0].message.as_deref().unwrap().contains("assumption 9"));
        assert_eq!(rows[1].status, RowStatus::Ok);
    }

    #[test]
    fn forced_partial_above_bound_is_a_failed_row() {
        let spec = SweepSpec::new(base(), Model::Basic)
            .axis(Axis::single(ParamKey::Ct, &[7.0]))
            .regimes(&[Regime::Partial]);
        let rows = run_sweep(&spec, false).unwrap();
        assert_eq!(rows[0].status, RowStatus::Failed);
    }

    #[test]
    fn cap_is_enforced_before_solving() {
        let mut spec = SweepSpec::new(base(), Model::Basic)
            .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0, 4.0]))
            .axis(Axis::single(ParamKey::Ct, &[0.5, 1.0]));
        spec.cap = 5;
        assert_eq!(
            run_sweep(&spec, false).unwrap_err(),
            SweepError::TooLarge { size: 6, cap: 5 }
        );
    }

    #[test]
    fn spec_errors() {
        let spec = SweepSpec::new(base(), Model::Basic).axis(Axis::single(ParamKey::Ch2, &[]));
        assert!(matches!(run_sweep(&spec, false), Err(SweepError::Spec(_))));
        let spec = SweepSpec::new(base(), Model::Basic)
            .axis(Axis::single(ParamKey::Ch2, &[3.0]))
            .axis(Axis::single(ParamKey::Ch2, &[4.0]));
        assert!(matches!(run_sweep(&spec, false), Err(SweepError::Spec(_))));
        let spec = SweepSpec::new(base(), Model::Basic).regimes(&[]);
        assert!(matches!(run_sweep(&spec, false), Err(SweepError::Spec(_))));
    }

    #[test]
    fn axis_json_forms() {
        let a: Axis = serde_json::from_str(r#"{"key": "ch2", "values": [2, 3]}"#).unwrap();
        assert_eq!(a, Axis::single(ParamKey::Ch2, &[2.0, 3.0]));
        let b: Axis =
            serde_json::from_str(r#"{"keys": ["ep1", "ep2"], "values": [[0.02, 0.021], [0.05, 0.02]]}"#).unwrap();
        assert_eq!(b.points[1], vec![0.05, 0.02]);
        assert!(serde_json::from_str::<Axis>(r#"{"keys": ["ep1", "ep2"], "values": [[0.02]]}"#).is_err());
        assert!(serde_json::from_str::<Axis>(r#"{"key": "zz", "values": [1]}"#).is_err());
        let back: Axis = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn checks_need_a_single_axis() {
        let spec = SweepSpec::new(base(), Model::Basic)
            .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0]))
            .axis(Axis::single(ParamKey::Ct, &[0.5, 1.0]));
        let rows = run_sweep(&spec, false).unwrap();
        assert!(matches!(qualitative_checks(&rows), Err(SweepError::Usage(_))));

        let spec = SweepSpec::new(base(), Model::Eoqiss)
            .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0]))
            .axis(Axis::single(ParamKey::Ep1, &[0.0, 0.05]));
        let rows = run_sweep(&spec, false).unwrap();
        assert!(matches!(qualitative_checks(&rows), Err(SweepError::Usage(_))));
    }

    #[test]
    fn constant_rows_pass_vacuously() {
        let spec = SweepSpec::new(base().with_defects(0.02, 0.02), Model::Eoqiss)
            .axis(Axis::single(ParamKey::Ep2, &[0.02]))
            .regimes(&[Regime::Partial, Regime::Full, Regime::NoSubstitution]);
        let rows = run_sweep(&spec, false).unwrap();
        let findings = qualitative_checks(&rows).unwrap();
        assert_eq!(findings.len(), 5);
        assert!(findings.iter().all(|f| f.passed && f.vacuous));
    }

    #[test]
    fn full_cost_rises_with_item1_defects() {
        let spec = SweepSpec::new(base(), Model::Eoqiss)
            .axis(Axis::single(ParamKey::Ep1, &[0.0, 0.05, 0.10]))
            .regimes(&[Regime::Full]);
        let rows = run_sweep(&spec, false).unwrap();
        let f = qualitative_checks(&rows).unwrap();
        let full = f.iter().find(|f| f.claim == "full_tac_increasing_in_ep1").unwrap();
        assert!(full.passed && !full.vacuous);
        assert_eq!(full.witnesses, vec![0, 1, 2]);
    }

    #[test]
    fn item2_lot_versus_its_defect_fraction() {
        let axis = Axis::single(ParamKey::Ep2, &[0.0, 0.05, 0.10]);
        let claim = |rows: &[SweepRow]| {
            qualitative_checks(rows)
                .unwrap()
                .into_iter()
                .find(|f| f.claim == "partial_lot2_nonincreasing_in_ep2")
                .unwrap()
        };

        // below x2 = 2 c_h2 D2 / (c_h2 - c_h1) defective stock is costly enough
        // for the lot to shrink
        let mut slow = base();
        slow.item2.screening_rate = 2000.0;
        let spec = SweepSpec::new(slow, Model::Eoqiss)
            .axis(axis.clone())
            .regimes(&[Regime::Partial]);
        let rows = run_sweep(&spec, false).unwrap();
        let f = claim(&rows);
        assert!(f.passed && !f.vacuous, "{f:?}");

        // at the reference screening rate the 1 / (1 - E[p2]) gross-up dominates
        let spec = SweepSpec::new(base(), Model::Eoqiss)
            .axis(axis)
            .regimes(&[Regime::Partial]);
        let rows = run_sweep(&spec, false).unwrap();
        let f = claim(&rows);
        assert!(!f.passed);
        // the perfect-unit volume D2 τ still falls
        let perfect: Vec<f64> = rows
            .iter()
            .map(|r| r.lot2.unwrap() * (1.0 - r.params.item2.defect_fraction_mean))
            .collect();
        assert!(perfect.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn deterministic_rows() {
        let spec = SweepSpec::new(base().with_defects(0.02, 0.02), Model::Eoqiss)
            .axis(Axis::single(ParamKey::Ch2, &[2.0, 3.0, 4.0, 5.0]))
            .regimes(&[Regime::Partial, Regime::Full, Regime::NoSubstitution, Regime::Auto]);
        let a = serde_json::to_string(&run_sweep(&spec, false).unwrap()).unwrap();
        let b = serde_json::to_string(&run_sweep(&spec, false).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_each_fills_residuals() {
        let spec = SweepSpec::new(base().with_defects(0.02, 0.02), Model::Eoqiss)
            .axis(Axis::single(ParamKey::Ch2, &[3.0, 5.0]));
        let rows = run_sweep(&spec, true).unwrap();
        for row in rows {
            assert_eq!(row.status, RowStatus::Ok);
            assert!(row.oracle_residual.unwrap() < 1e-4);
        }
    }
}
