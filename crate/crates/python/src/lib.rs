//! Python bindings: terms, estimates, explorations and property checks.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use brane_cfa::cfa::{self, diff_estimates, estimate_from_str, estimate_to_string, Mode, SolverConfig};
use brane_cfa::properties::{self, check_dynamic, check_static, parse_queries, Depth};
use brane_cfa::semantics::{self, ExploreConfig, MiRegistry};
use brane_cfa::syntax::{self, canonicalize, MembraneId, SystemTerm};
use brane_cfa::verify::{self, VerifyConfig};

fn value_error(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_error(e: impl ToString) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (v.to_string(),))?.unbind())
}

fn mode(name: &str) -> PyResult<Mode> {
    match name {
        "sound" => Ok(Mode::Sound),
        "strict-paper" => Ok(Mode::StrictPaper),
        other => Err(value_error(format!("unknown mode `{other}`"))),
    }
}

fn depth(transitive: bool) -> Depth {
    if transitive {
        Depth::Transitive
    } else {
        Depth::Direct
    }
}

/// A parsed system with every membrane labelled.
#[pyclass(name = "Term", frozen)]
struct PyTerm(SystemTerm);

#[pymethods]
impl PyTerm {
    fn labels(&self) -> Vec<String> {
        self.0.labels().iter().map(|l| l.to_string()).collect()
    }

    /// The congruence normal form, printed.
    fn canonical(&self) -> String {
        syntax::pretty(&canonicalize(&self.0).to_term())
    }

    fn __str__(&self) -> String {
        syntax::pretty(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", syntax::pretty(&self.0))
    }

    fn __eq__(&self, other: &PyTerm) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "Estimate", frozen)]
struct PyEstimate(cfa::Estimate);

#[pymethods]
impl PyEstimate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        estimate_from_str(text).map(PyEstimate).map_err(value_error)
    }

    fn to_json(&self) -> String {
        estimate_to_string(&self.0)
    }

    fn entry_count(&self) -> usize {
        self.0.entry_count()
    }

    /// Membranes and actions recorded in the slot `(grandparent, parent, membrane)`.
    fn contents(&self, gp: &str, parent: &str, membrane: &str) -> Vec<String> {
        let slot = cfa::Slot::new(MembraneId::new(gp), MembraneId::new(parent), MembraneId::new(membrane));
        self.0.items(&slot).iter().map(|i| i.to_string()).collect()
    }

    /// Records explaining how `membrane` can be created.
    fn causes(&self, membrane: &str) -> Vec<String> {
        properties::causes_of(&self.0, &MembraneId::new(membrane))
            .iter()
            .map(|r| r.to_string())
            .collect()
    }

    /// Derivations of `membrane`, each a list of records, earliest first.
    fn chains(&self, membrane: &str) -> Vec<Vec<String>> {
        properties::causal_chain(&self.0, &MembraneId::new(membrane))
            .chains
            .iter()
            .map(|c| c.links.iter().map(|r| r.to_string()).collect())
            .collect()
    }

    /// Entries present here but not in `other`, then the reverse, as text.
    fn diff(&self, other: &PyEstimate) -> String {
        diff_estimates(&self.0, &other.0).to_string()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __eq__(&self, other: &PyEstimate) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "TransitionSystem", frozen)]
struct PyTransitionSystem(semantics::TransitionSystem);

#[pymethods]
impl PyTransitionSystem {
    #[getter]
    fn states(&self) -> Vec<String> {
        self.0.states.iter().map(|s| syntax::pretty(&s.to_term())).collect()
    }

    /// `(source, redex, target)` triples.
    #[getter]
    fn edges(&self) -> Vec<(usize, String, usize)> {
        self.0
            .edges
            .iter()
            .map(|e| (e.src, e.redex.to_string(), e.dst))
            .collect()
    }

    #[getter]
    fn truncated(&self) -> bool {
        self.0.truncated
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &semantics::to_json(&self.0))
    }

    fn to_dot(&self) -> String {
        semantics::to_dot(&self.0)
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyTerm> {
    syntax::parse(text).map(PyTerm).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (term, mode = "sound", membrane_cap = semantics::DEFAULT_MEMBRANE_CAP))]
fn solve(term: &PyTerm, mode: &str, membrane_cap: usize) -> PyResult<PyEstimate> {
    let cfg = SolverConfig {
        mode: self::mode(mode)?,
        membrane_cap,
    };
    cfa::solve_with(&term.0, &cfg, &mut MiRegistry::with_cap(membrane_cap))
        .map(PyEstimate)
        .map_err(runtime_error)
}

#[pyfunction]
#[pyo3(signature = (term, depth = 4, unfold = 2, state_cap = semantics::DEFAULT_STATE_CAP))]
fn explore(term: &PyTerm, depth: usize, unfold: usize, state_cap: usize) -> PyResult<PyTransitionSystem> {
    let cfg = ExploreConfig {
        depth,
        unfold_budget: unfold,
        state_cap,
    };
    semantics::explore_with(&term.0, &cfg, MiRegistry::new())
        .map(PyTransitionSystem)
        .map_err(runtime_error)
}

/// Checks each query of `queries` (query-file syntax) against the estimate,
/// and against `system` too when given.
#[pyfunction]
#[pyo3(signature = (estimate, queries, system = None, transitive = false))]
fn check(
    py: Python<'_>,
    estimate: &PyEstimate,
    queries: &str,
    system: Option<&PyTransitionSystem>,
    transitive: bool,
) -> PyResult<Py<PyAny>> {
    let queries = parse_queries(queries).map_err(value_error)?;
    let d = depth(transitive);
    let mut out = Vec::new();
    for q in &queries {
        let s = check_static(&estimate.0, q, d);
        let mut entry = serde_json::json!({"query": q.to_string(), "static": s.holds, "vacuous": s.vacuous});
        if let Some(ts) = system {
            let v = check_dynamic(&ts.0, q, d);
            entry["dynamic"] = v.holds.into();
            entry["inconclusive"] = v.inconclusive.into();
        }
        out.push(entry);
    }
    to_py(py, &Value::Array(out))
}

/// Runs every verification suite; returns `{"passed", "truncated", "obligations"}`.
#[pyfunction(name = "verify")]
#[pyo3(signature = (term, estimate = None, queries = "", depth = 4, unfold = 2, seed = 0))]
fn check_all(
    py: Python<'_>,
    term: &PyTerm,
    estimate: Option<&PyEstimate>,
    queries: &str,
    depth: usize,
    unfold: usize,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let est = match estimate {
        Some(e) => e.0.clone(),
        None => cfa::solve(&term.0).map_err(runtime_error)?,
    };
    let queries = parse_queries(queries).map_err(value_error)?;
    let cfg = VerifyConfig {
        explore: ExploreConfig {
            depth,
            unfold_budget: unfold,
            ..ExploreConfig::default()
        },
        seed,
        ..VerifyConfig::default()
    };
    let report = verify::verify(&term.0, &est, &queries, &cfg).map_err(runtime_error)?;
    let obligations: Vec<Value> = report
        .obligations
        .iter()
        .map(|o| {
            serde_json::json!({
                "suite": o.suite,
                "passed": o.passed,
                "checked": o.checked,
                "counterexample": o.counterexample,
            })
        })
        .collect();
    let v = serde_json::json!({"passed": report.passed(), "truncated": report.truncated, "obligations": obligations});
    to_py(py, &v)
}

#[pymodule(name = "brane_cfa")]
fn brane_cfa_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTerm>()?;
    m.add_class::<PyEstimate>()?;
    m.add_class::<PyTransitionSystem>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(check_all, m)?)?;
    Ok(())
}
