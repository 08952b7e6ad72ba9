//! Python bindings: graphs, walk-matrix arithmetic and DGS certification.
//!
//! Structured results (verdicts, certificates, survey rows, mates) are
//! returned as plain dicts with the same layout as the CLI's JSON output.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyTuple;
use serde::Serialize;

use dgs_core::graph::{self, is_isomorphic};
use dgs_core::{criterion, linalg, oracle, survey, walk, Budget};

fn value_error(e: dgs_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts a serializable value into Python objects through `json.loads`.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn budget(trial_bound: Option<u64>, rho_budget: Option<u64>, ecm_curves: Option<u64>) -> Budget {
    let d = Budget::default();
    Budget {
        trial_bound: trial_bound.unwrap_or(d.trial_bound),
        rho_iterations: rho_budget.unwrap_or(d.rho_iterations),
        ecm_curves: ecm_curves.unwrap_or(d.ecm_curves),
    }
}

/// A simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: dgs_core::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = dgs_core::Graph::from_edges(n, &edges).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        let inner = graph::parse_graph6(text).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn from_adjacency(text: &str) -> PyResult<Self> {
        let inner = graph::parse_adjacency_text(text).map_err(value_error)?;
        Ok(PyGraph { inner })
    }

    /// A sample from G(n, 1/2).
    #[staticmethod]
    fn random(n: usize, seed: u64) -> Self {
        PyGraph {
            inner: graph::random_gnp_half(n, seed),
        }
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn graph6(&self) -> String {
        graph::encode_graph6(&self.inner)
    }

    fn complement(&self) -> Self {
        PyGraph {
            inner: graph::complement(&self.inner),
        }
    }

    fn adjacency(&self) -> Vec<Vec<u8>> {
        self.inner.adjacency_rows()
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Graph.from_graph6({:?})", graph::encode_graph6(&self.inner))
    }
}

fn matrix_rows(m: &dgs_core::BigIntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// The walk matrix `[e, Ae, ..., A^{n-1} e]` as a list of rows.
#[pyfunction]
fn walk_matrix(g: &PyGraph) -> PyResult<Vec<Vec<BigInt>>> {
    let b = walk::build_walk_bundle(&g.inner).map_err(value_error)?;
    Ok(matrix_rows(&b.w))
}

#[pyfunction]
fn det_walk(g: &PyGraph) -> PyResult<BigInt> {
    walk::det_walk(&g.inner).map_err(value_error)
}

/// Invariant factors of the walk matrix; raises for singular `W`.
#[pyfunction]
fn snf_walk(g: &PyGraph) -> PyResult<Vec<BigInt>> {
    let w = walk::build_walk_bundle(&g.inner).map_err(value_error)?.w;
    Ok(linalg::smith_normal_form(&w, false).map_err(value_error)?.diag)
}

/// Compact Smith form text such as `1×10, 2×7, 4, 4, 4b`, and `b`.
#[pyfunction]
fn snf_shape(g: &PyGraph) -> PyResult<(String, BigInt)> {
    let w = walk::build_walk_bundle(&g.inner).map_err(value_error)?.w;
    Ok(linalg::smith_normal_form(&w, false).map_err(value_error)?.shape())
}

#[pyfunction]
#[pyo3(signature = (g, trial_bound=None, rho_budget=None, ecm_curves=None))]
fn certify<'py>(
    py: Python<'py>,
    g: &PyGraph,
    trial_bound: Option<u64>,
    rho_budget: Option<u64>,
    ecm_curves: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(trial_bound, rho_budget, ecm_curves);
    let v = py
        .detach(|| criterion::certify(&g.inner, &b))
        .map_err(value_error)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (g, trial_bound=None, rho_budget=None, ecm_curves=None))]
fn check_fn<'py>(
    py: Python<'py>,
    g: &PyGraph,
    trial_bound: Option<u64>,
    rho_budget: Option<u64>,
    ecm_curves: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(trial_bound, rho_budget, ecm_curves);
    let v = py
        .detach(|| criterion::check_fn(&g.inner, &b))
        .map_err(value_error)?;
    to_py(py, &v)
}

#[pyfunction]
#[pyo3(signature = (b, trial_bound=None, rho_budget=None, ecm_curves=None))]
fn certify_squarefree<'py>(
    py: Python<'py>,
    b: BigInt,
    trial_bound: Option<u64>,
    rho_budget: Option<u64>,
    ecm_curves: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let budget = budget(trial_bound, rho_budget, ecm_curves);
    let c = py
        .detach(|| dgs_core::certify_squarefree(&b, &budget))
        .map_err(value_error)?;
    to_py(py, &c)
}

/// Characteristic polynomial coefficients (leading first) of the graph and
/// of its complement.
#[pyfunction]
fn spectrum_key<'py>(py: Python<'py>, g: &PyGraph) -> PyResult<Bound<'py, PyTuple>> {
    let k = oracle::spectrum_key(&g.inner);
    PyTuple::new(py, [k.adjacency.coeffs().to_vec(), k.complement.coeffs().to_vec()])
}

#[pyfunction]
fn isomorphic(g: &PyGraph, h: &PyGraph) -> bool {
    is_isomorphic(&g.inner, &h.inner)
}

/// Godsil–McKay mates of `g` with reconstructed `Q` summaries.
#[pyfunction]
#[pyo3(signature = (g, trial_bound=None, rho_budget=None, ecm_curves=None))]
fn gm_mates<'py>(
    py: Python<'py>,
    g: &PyGraph,
    trial_bound: Option<u64>,
    rho_budget: Option<u64>,
    ecm_curves: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(trial_bound, rho_budget, ecm_curves);
    let mates = py.detach(|| oracle::gm_mates(&g.inner, &b)).map_err(value_error)?;
    to_py(py, &mates)
}

#[pyfunction]
#[pyo3(signature = (sizes, samples, seed, workers=1, trial_bound=None, rho_budget=None, ecm_curves=None))]
#[allow(clippy::too_many_arguments)]
fn run_survey<'py>(
    py: Python<'py>,
    sizes: Vec<usize>,
    samples: usize,
    seed: u64,
    workers: usize,
    trial_bound: Option<u64>,
    rho_budget: Option<u64>,
    ecm_curves: Option<u64>,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(trial_bound, rho_budget, ecm_curves);
    let rows = py
        .detach(|| survey::run_survey(&sizes, samples, seed, &b, workers))
        .map_err(value_error)?;
    to_py(py, &rows)
}

#[pymodule]
fn dgs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", dgs_core::report::SCHEMA_VERSION)?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(walk_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(det_walk, m)?)?;
    m.add_function(wrap_pyfunction!(snf_walk, m)?)?;
    m.add_function(wrap_pyfunction!(snf_shape, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(check_fn, m)?)?;
    m.add_function(wrap_pyfunction!(certify_squarefree, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_key, m)?)?;
    m.add_function(wrap_pyfunction!(isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(gm_mates, m)?)?;
    m.add_function(wrap_pyfunction!(run_survey, m)?)?;
    Ok(())
}
