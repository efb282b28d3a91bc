//! Python bindings for labshift.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use labshift::labels::{property_check, LabelJson, Property};
use labshift::subshift::{default_partition, point_window, Mode};
use labshift::{zoo, ExpandingSystem, Label};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn system(preset: &str) -> PyResult<ExpandingSystem> {
    ExpandingSystem::preset(preset).map_err(err)
}

fn label(json: &str) -> PyResult<Label> {
    LabelJson::parse(json).and_then(|j| j.to_label()).map_err(err)
}

fn big(s: &str) -> PyResult<BigInt> {
    s.parse().map_err(err)
}

/// Signed digits of the expansion of `t`, or `None`.
#[pyfunction]
#[pyo3(signature = (t, preset = "strict"))]
fn expand(t: &str, preset: &str) -> PyResult<Option<Vec<i64>>> {
    Ok(system(preset)?.expand(&big(t)?).map(|e| e.digits().to_vec()))
}

/// Positions of the ones of the point `x[M]` on `[-n, n]`, shifted by `shift`.
#[pyfunction]
#[pyo3(signature = (label_json, n, shift = "0", plus = false, preset = "strict"))]
fn window(label_json: &str, n: u32, shift: &str, plus: bool, preset: &str) -> PyResult<Vec<i64>> {
    let mode = if plus { Mode::Plus } else { Mode::Full };
    let w = point_window(&system(preset)?, &default_partition(), &label(label_json)?, n, mode, &big(shift)?).map_err(err)?;
    Ok(w.ones)
}

/// Generators of `M ∩ B_n` in display form.
#[pyfunction]
fn label_window(label_json: &str, n: u32) -> PyResult<String> {
    Ok(label(label_json)?.window(n).map_err(err)?.to_string())
}

/// Verdict JSON of a property check on `B_n`.
#[pyfunction]
#[pyo3(signature = (label_json, property, n, horizon = 40))]
fn check(label_json: &str, property: &str, n: u32, horizon: u32) -> PyResult<String> {
    let p: Property = property.parse().map_err(err)?;
    let v = property_check(&label(label_json)?, p, n, horizon).map_err(err)?;
    serde_json::to_string(&v).map_err(err)
}

/// Report JSON of every zoo expectation, and whether all rows pass.
#[pyfunction]
#[pyo3(signature = (n = 6, horizon = 16))]
fn zoo_verify(n: u32, horizon: u32) -> PyResult<(bool, String)> {
    let r = zoo::verify_all(n, horizon).map_err(err)?;
    Ok((r.all_pass(), serde_json::to_string(&r).map_err(err)?))
}

/// Runs the command line with `args`; returns the exit code and stdout.
#[pyfunction]
fn cli(args: Vec<String>) -> (i32, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let argv = std::iter::once("labshift".to_string()).chain(args);
    let code = labshift::cli::run_with(argv, None, &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned())
}

#[pymodule]
fn labshift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(window, m)?)?;
    m.add_function(wrap_pyfunction!(label_window, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(zoo_verify, m)?)?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
