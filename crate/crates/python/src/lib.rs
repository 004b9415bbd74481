//! Python bindings. Reports and rows cross the boundary as plain dicts.

use eoq_subst::sensitivity::Axis;
use eoq_subst::{FixedPointSettings, Formulas, ItemParams, Model, ParamKey, Policy, Regime, SearchRegion, SweepSpec};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_model(name: &str) -> PyResult<Model> {
    match name {
        "basic" => Ok(Model::Basic),
        "eoqiss" => Ok(Model::Eoqiss),
        other => Err(value_err(format!("unknown model `{other}` (expected basic or eoqiss)"))),
    }
}

fn parse_regime(name: &str) -> PyResult<Regime> {
    name.parse().map_err(value_err)
}

fn solve_error(e: eoq_subst::SolveError) -> PyErr {
    match e {
        eoq_subst::SolveError::Invalid(_) | eoq_subst::SolveError::Settings(_) => value_err(e),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Model inputs. Keyword names follow the config file keys.
#[pyclass(name = "SystemParams", from_py_object)]
#[derive(Clone)]
struct PySystemParams {
    inner: eoq_subst::SystemParams,
}

#[pymethods]
impl PySystemParams {
    #[new]
    #[pyo3(signature = (d1, d2, ch1, ch2, x1, x2, co, ct, ep1 = 0.0, ep2 = 0.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(d1: f64, d2: f64, ch1: f64, ch2: f64, x1: f64, x2: f64, co: f64, ct: f64, ep1: f64, ep2: f64) -> Self {
        Self {
            inner: eoq_subst::SystemParams {
                item1: ItemParams::new(d1, ch1, x1, ep1),
                item2: ItemParams::new(d2, ch2, x2, ep2),
                ordering_cost: co,
                transfer_cost: ct,
            },
        }
    }

    /// The worked example: D1 = D2 = 1000, c_o = 4500, c_h1 = 1, c_h2 = 5, c_t = 1.
    #[staticmethod]
    fn reference() -> Self {
        Self {
            inner: eoq_subst::SystemParams::reference(),
        }
    }

    /// Copy with one parameter replaced.
    fn with_value(&self, key: &str, value: f64) -> PyResult<Self> {
        let key: ParamKey = key.parse().map_err(value_err)?;
        let mut inner = self.inner;
        key.set(&mut inner, value);
        Ok(Self { inner })
    }

    fn get(&self, key: &str) -> PyResult<f64> {
        let key: ParamKey = key.parse().map_err(value_err)?;
        Ok(key.get(&self.inner))
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for key in ParamKey::ALL {
            d.set_item(key.as_str(), key.get(&self.inner))?;
        }
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let fields: Vec<String> = ParamKey::ALL
            .iter()
            .map(|k| format!("{}={}", k.as_str(), k.get(&self.inner)))
            .collect();
        format!("SystemParams({})", fields.join(", "))
    }
}

/// Violated assumptions as a list of dicts; empty when valid.
#[pyfunction]
#[pyo3(signature = (params, model = "eoqiss"))]
fn validate<'py>(py: Python<'py>, params: &PySystemParams, model: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &parse_model(model)?.validate(&params.inner))
}

/// Average cost breakdown of a policy.
#[pyfunction]
#[pyo3(signature = (params, runout_time, cycle_time, model = "eoqiss"))]
fn tac<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    runout_time: f64,
    cycle_time: f64,
    model: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let policy = Policy::new(runout_time, cycle_time).map_err(value_err)?;
    let cost = parse_model(model)?.tac(&params.inner, policy).map_err(value_err)?;
    to_py(py, &cost)
}

#[pyfunction]
#[pyo3(signature = (params, model = "eoqiss", regime = "auto", paper_verbatim = false))]
fn solve<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    model: &str,
    regime: &str,
    paper_verbatim: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let formulas = if paper_verbatim {
        Formulas::Printed
    } else {
        Formulas::Derived
    };
    let report = eoq_subst::solve(
        &params.inner,
        parse_model(model)?,
        parse_regime(regime)?,
        &FixedPointSettings::default(),
        formulas,
    )
    .map_err(solve_error)?;
    to_py(py, &report)
}

/// Solves, then checks the optimum against the simulation oracle.
#[pyfunction]
#[pyo3(signature = (params, model = "eoqiss", regime = "auto", ceiling = 1e-4))]
fn verify<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    model: &str,
    regime: &str,
    ceiling: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = &params.inner;
    let report = eoq_subst::solve(
        p,
        parse_model(model)?,
        parse_regime(regime)?,
        &FixedPointSettings::default(),
        Formulas::Derived,
    )
    .map_err(solve_error)?;
    let v = eoq_subst::oracle::verify_with_ceiling(&report, p, &SearchRegion::default_for(p), ceiling)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// Runs a sweep. `axes` is a list of `(key, values)` pairs; a tuple of keys
/// with a list of tuples sweeps those keys jointly.
#[pyfunction]
#[pyo3(signature = (params, axes, model = "eoqiss", regimes = vec!["auto".to_string()], verify_each = false))]
fn sweep<'py>(
    py: Python<'py>,
    params: &PySystemParams,
    axes: Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>)>,
    model: &str,
    regimes: Vec<String>,
    verify_each: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let mut spec = SweepSpec::new(params.inner, parse_model(model)?);
    spec.regimes = regimes.iter().map(|r| parse_regime(r)).collect::<PyResult<_>>()?;
    for (keys, values) in axes {
        let axis = if let Ok(key) = keys.extract::<String>() {
            let key: ParamKey = key.parse().map_err(value_err)?;
            Axis::single(key, &values.extract::<Vec<f64>>()?)
        } else {
            let keys: Vec<ParamKey> = keys
                .extract::<Vec<String>>()?
                .iter()
                .map(|k| k.parse().map_err(value_err))
                .collect::<PyResult<_>>()?;
            let points: Vec<Vec<f64>> = values.extract()?;
            if points.iter().any(|p| p.len() != keys.len()) {
                return Err(value_err("every joint point needs one value per key"));
            }
            Axis { keys, points }
        };
        spec.axes.push(axis);
    }
    let rows = eoq_subst::run_sweep(&spec, verify_each).map_err(value_err)?;
    let findings = eoq_subst::qualitative_checks(&rows).ok();
    let out = PyDict::new(py);
    out.set_item("rows", to_py(py, &rows)?)?;
    out.set_item("findings", to_py(py, &findings)?)?;
    Ok(out.into_any())
}

#[pymodule]
#[pyo3(name = "eoq_subst")]
fn eoq_subst_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystemParams>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(tac, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
