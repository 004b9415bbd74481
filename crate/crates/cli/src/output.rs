//! JSON and CSV rendering. Floats in CSV carry 17 significant digits.

use std::fmt::Write;

use eoq_subst::sensitivity::SweepRow;
use eoq_subst::{Finding, SolveReport, Verification};
use serde::Serialize;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

const REPORT_COLUMNS: &str = "model,regime,formulas,mode,runout_time,cycle_time,lot1,lot2,transfer_volume,ordering,holding1,holding2,transfer,total,basic_convexity,eoqiss_convexity,hessian_psd,iterations,oracle_residual";

fn report_row(r: &SolveReport) -> String {
    let formulas = serde_json::to_value(r.formulas).expect("serializable");
    [
        r.model.to_string(),
        r.regime.to_string(),
        formulas.as_str().unwrap_or_default().to_string(),
        r.mode.to_string(),
        num(r.policy.runout_time),
        num(r.policy.cycle_time),
        num(r.lots.lot1),
        num(r.lots.lot2),
        num(r.transfer_volume),
        num(r.cost.ordering),
        num(r.cost.holding1),
        num(r.cost.holding2),
        num(r.cost.transfer),
        num(r.cost.total),
        opt(r.basic_convexity),
        opt(r.eoqiss_convexity),
        r.hessian_psd.to_string(),
        opt(r.iterations),
        opt_num(r.oracle_residual),
    ]
    .join(",")
}

pub fn report_csv(r: &SolveReport) -> String {
    format!("{REPORT_COLUMNS}\n{}\n", report_row(r))
}

pub fn verification_csv(v: &Verification) -> String {
    let mut out = format!("{REPORT_COLUMNS},oracle_runout_time,oracle_cycle_time,oracle_total,consistency_gap\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        report_row(&v.report),
        num(v.oracle.policy.runout_time),
        num(v.oracle.policy.cycle_time),
        num(v.oracle.value),
        num(v.consistency_gap)
    );
    out
}

#[derive(Serialize)]
pub struct SweepHeader<'a> {
    pub tool: &'a str,
    pub version: &'a str,
    pub config_sha256: String,
    pub model: String,
    pub axes: &'a [eoq_subst::sensitivity::Axis],
}

#[derive(Serialize)]
pub struct SweepDocument<'a> {
    #[serde(flatten)]
    pub header: SweepHeader<'a>,
    pub rows: &'a [SweepRow],
    /// Absent when the rows do not vary along a single checkable axis.
    pub findings: Option<Vec<Finding>>,
}

pub fn sweep_csv(header: &SweepHeader, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# tool: {} {}", header.tool, header.version);
    let _ = writeln!(out, "# config_sha256: {}", header.config_sha256);
    let _ = writeln!(out, "# model: {}", header.model);
    for axis in header.axes {
        let keys: Vec<_> = axis.keys.iter().map(|k| k.as_str()).collect();
        let points: Vec<String> = axis
            .points
            .iter()
            .map(|p| p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("/"))
            .collect();
        let _ = writeln!(out, "# axis {}: {}", keys.join("/"), points.join(" "));
    }
    let keys: Vec<String> = header
        .axes
        .iter()
        .flat_map(|a| a.keys.iter().map(|k| k.to_string()))
        .collect();
    let mut columns = keys;
    columns.extend(
        [
            "regime",
            "status",
            "mode",
            "runout_time",
            "cycle_time",
            "lot1",
            "lot2",
            "tac",
            "basic_convexity",
            "eoqiss_convexity",
            "oracle_residual",
            "message",
        ]
        .map(String::from),
    );
    let _ = writeln!(out, "{}", columns.join(","));
    for r in rows {
        let mut cells: Vec<String> = r.values.iter().map(|v| num(v.value)).collect();
        cells.extend([
            r.regime.to_string(),
            r.status.to_string(),
            opt(r.mode),
            opt_num(r.runout_time),
            opt_num(r.cycle_time),
            opt_num(r.lot1),
            opt_num(r.lot2),
            opt_num(r.tac),
            opt(r.basic_convexity),
            opt(r.eoqiss_convexity),
            opt_num(r.oracle_residual),
            quote(r.message.as_deref().unwrap_or_default()),
        ]);
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}
