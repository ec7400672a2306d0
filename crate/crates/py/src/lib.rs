//! Python module `cpw`. Vertices are 0-based ints; decompositions are lists of
//! bags, each a sorted list of vertices.

use cpw_core as core;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Bags = Vec<Vec<usize>>;

#[pyclass(name = "Graph", module = "cpw", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    pub inner: core::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: core::Graph::from_edges(n, &edges).map_err(err)? })
    }

    /// Reads the `p n m` / `e u v` text format (1-based ids in the text).
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: core::parse_graph(text).map_err(err)?.graph })
    }

    fn to_text(&self) -> String {
        core::format_graph(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn apex(&self) -> Self {
        PyGraph { inner: core::apex_augment(&self.inner) }
    }

    fn subdivide(&self) -> Self {
        PyGraph { inner: core::subdivide_twice(&self.inner) }
    }

    fn contract(&self, u: usize, v: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: core::contract_edge(&self.inner, u, v).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

fn decomposition(bags: &Bags) -> core::PathDecomposition {
    core::PathDecomposition::from_vecs(bags)
}

/// Minimum width and a decomposition attaining it.
#[pyfunction]
fn exact_pathwidth(g: &PyGraph) -> PyResult<(usize, Bags)> {
    let (w, p) = core::exact_pathwidth(&g.inner).map_err(err)?;
    Ok((w, p.to_vecs()))
}

/// Width of `bags` as a path-decomposition of `g`; raises if invalid.
#[pyfunction]
fn validate(g: &PyGraph, bags: Bags) -> PyResult<usize> {
    core::validate(&g.inner, &decomposition(&bags)).map_err(err)
}

#[pyfunction]
fn is_connected_decomposition(g: &PyGraph, bags: Bags) -> bool {
    core::is_connected_decomposition(&g.inner, &decomposition(&bags), &core::VertexSet::new())
}

/// Witness bags if `g` has a connected path-decomposition of width at most
/// `w`, else None. `decomposition` defaults to one of minimum width.
#[pyfunction]
#[pyo3(signature = (g, w, decomposition = None))]
fn decide_cpw(py: Python<'_>, g: &PyGraph, w: usize, decomposition: Option<Bags>) -> PyResult<Option<Bags>> {
    py.detach(|| {
        let q = match decomposition {
            Some(b) => core::PathDecomposition::from_vecs(&b),
            None => core::exact_pathwidth(&g.inner).map_err(err)?.1,
        };
        let d = core::decide_cpw(&g.inner, &q, w).map_err(err)?;
        Ok(d.witness.map(|wit| wit.decomposition.to_vecs()))
    })
}

/// Connected pathwidth and a witness.
#[pyfunction]
fn compute_cpw(py: Python<'_>, g: &PyGraph) -> PyResult<(usize, Bags)> {
    py.detach(|| {
        let (k, wit) = core::compute_cpw(&g.inner).map_err(err)?;
        Ok((k, wit.decomposition.to_vecs()))
    })
}

#[pyfunction]
fn oracle_cpw(g: &PyGraph, w: usize) -> PyResult<bool> {
    core::oracle_cpw(&g.inner, w).map_err(err)
}

#[pyfunction]
fn oracle_pw(g: &PyGraph) -> PyResult<usize> {
    core::oracle_pw(&g.inner).map_err(err)
}

/// Typical sequence as `(values, tips)`.
#[pyfunction]
fn tseq(a: Vec<u32>) -> PyResult<(Vec<u32>, Vec<usize>)> {
    let t = core::tseq(&a).map_err(err)?;
    Ok((t.values, t.tips))
}

#[pyfunction]
fn dominates_int(a: Vec<u32>, b: Vec<u32>) -> bool {
    core::dominates_int(&a, &b)
}

#[pyfunction]
fn mcns(py: Python<'_>, g: &PyGraph) -> PyResult<usize> {
    py.detach(|| core::mcns(&g.inner).map_err(err))
}

#[pyfunction]
fn mces(py: Python<'_>, g: &PyGraph) -> PyResult<usize> {
    py.detach(|| core::mces(&g.inner).map_err(err))
}

#[pymodule]
fn cpw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(exact_pathwidth, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(is_connected_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(decide_cpw, m)?)?;
    m.add_function(wrap_pyfunction!(compute_cpw, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_cpw, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_pw, m)?)?;
    m.add_function(wrap_pyfunction!(tseq, m)?)?;
    m.add_function(wrap_pyfunction!(dominates_int, m)?)?;
    m.add_function(wrap_pyfunction!(mcns, m)?)?;
    m.add_function(wrap_pyfunction!(mces, m)?)?;
    Ok(())
}
