//! Python bindings. Inputs and outputs are JSON text, the same documents the
//! CLI reads and writes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use symscope_core::cohomology::{is_coboundary, is_cocycle, same_class, CocycleJson};
use symscope_core::scenario::{run_anomaly, run_scenario, sweep_sizes, to_json_string, Scenario};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(text: &str) -> PyResult<Scenario> {
    Scenario::parse(text).map_err(err)
}

/// Run a scenario and return the report bundle as JSON.
#[pyfunction]
#[pyo3(signature = (scenario, seed=None))]
fn diagnose(py: Python<'_>, scenario: &str, seed: Option<u64>) -> PyResult<String> {
    let s = parse(scenario)?;
    py.detach(|| run_scenario(&s, seed).and_then(|b| to_json_string(&b))).map_err(err)
}

/// Whether any verdict in a report bundle is INCONCLUSIVE.
#[pyfunction]
#[pyo3(signature = (scenario, seed=None))]
fn inconclusive(py: Python<'_>, scenario: &str, seed: Option<u64>) -> PyResult<bool> {
    let s = parse(scenario)?;
    py.detach(|| run_scenario(&s, seed).map(|b| b.any_inconclusive())).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (scenario, sizes, seed=None))]
fn sweep(py: Python<'_>, scenario: &str, sizes: Vec<usize>, seed: Option<u64>) -> PyResult<String> {
    let s = parse(scenario)?;
    py.detach(|| sweep_sizes(&s, &sizes, seed).and_then(|t| to_json_string(&t))).map_err(err)
}

#[pyfunction]
fn anomaly(py: Python<'_>, scenario: &str) -> PyResult<String> {
    let s = parse(scenario)?;
    py.detach(|| run_anomaly(&s).and_then(|a| to_json_string(&a))).map_err(err)
}

/// `(is_cocycle, class_trivial)`; the second is `None` for non-cocycles.
#[pyfunction]
fn check_cocycle(cocycle: &str) -> PyResult<(bool, Option<bool>)> {
    let c = CocycleJson::parse(cocycle).map_err(err)?;
    if !is_cocycle(&c) {
        return Ok((false, None));
    }
    Ok((true, Some(is_coboundary(&c).map_err(err)?.is_some())))
}

/// A cochain `η` with `δη = ω` as cocycle JSON, or `None`.
#[pyfunction]
fn trivialize(cocycle: &str) -> PyResult<Option<String>> {
    let c = CocycleJson::parse(cocycle).map_err(err)?;
    match is_coboundary(&c).map_err(err)? {
        Some(eta) => Ok(Some(serde_json::to_string(&CocycleJson::from_cochain(&eta)).map_err(err)?)),
        None => Ok(None),
    }
}

#[pyfunction(name = "same_class")]
fn same_class_py(first: &str, second: &str) -> PyResult<bool> {
    let a = CocycleJson::parse(first).map_err(err)?;
    let b = CocycleJson::parse(second).map_err(err)?;
    same_class(&a, &b).map_err(err)
}

#[pymodule]
fn symscope(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(diagnose, m)?)?;
    m.add_function(wrap_pyfunction!(inconclusive, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(anomaly, m)?)?;
    m.add_function(wrap_pyfunction!(check_cocycle, m)?)?;
    m.add_function(wrap_pyfunction!(trivialize, m)?)?;
    m.add_function(wrap_pyfunction!(same_class_py, m)?)?;
    Ok(())
}
