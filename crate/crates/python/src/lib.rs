//! Python module `wielandt_py`.
//!
//! Matrices cross the boundary as nested lists of Python `complex`; reports
//! come back as plain dicts built from the JSON serialization.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use wielandt::analysis::{self, AnalyzeOptions};
use wielandt::generators::{self, Family};
use wielandt::io::MapFile;
use wielandt::linalg::{C64, Mat};
use wielandt::{multdomain, primindex, spectral};
use wielandt::{CMatrix, SearchBudget, SuperOp, Tolerances};

create_exception!(wielandt_py, WielandtError, PyValueError);

type Rows = Vec<Vec<C64>>;

fn err(e: wielandt::Error) -> PyErr {
    WielandtError::new_err(e.to_string())
}

fn to_mat(rows: &Rows) -> PyResult<Mat> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != rows.first().map_or(0, Vec::len)) {
        return Err(WielandtError::new_err("ragged matrix rows"));
    }
    let m = rows.first().map_or(0, Vec::len);
    Ok(Mat::from_fn(n, m, |i, j| rows[i][j]))
}

fn to_cmatrix(rows: &Rows) -> PyResult<CMatrix> {
    CMatrix::new(to_mat(rows)?).map_err(err)
}

fn rows_of(m: &Mat) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| WielandtError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn options(cap: Option<usize>) -> AnalyzeOptions {
    AnalyzeOptions {
        cap,
        ..AnalyzeOptions::default()
    }
}

#[pyclass(name = "SuperOp", module = "wielandt_py", from_py_object)]
#[derive(Clone)]
struct PySuperOp {
    inner: SuperOp,
}

impl From<SuperOp> for PySuperOp {
    fn from(inner: SuperOp) -> Self {
        PySuperOp { inner }
    }
}

#[pymethods]
impl PySuperOp {
    #[staticmethod]
    fn from_kraus(kraus: Vec<Rows>) -> PyResult<Self> {
        let ks = kraus.iter().map(to_cmatrix).collect::<PyResult<Vec<_>>>()?;
        Ok(SuperOp::from_kraus(ks).map_err(err)?.into())
    }

    #[staticmethod]
    fn from_choi(dim: usize, choi: Rows) -> PyResult<Self> {
        Ok(SuperOp::from_choi(dim, to_mat(&choi)?).map_err(err)?.into())
    }

    #[staticmethod]
    fn from_natural(dim: usize, natural: Rows) -> PyResult<Self> {
        Ok(SuperOp::from_natural(dim, to_mat(&natural)?).map_err(err)?.into())
    }

    /// Parses the JSON map-file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = MapFile::from_json(text).map_err(err)?;
        Ok(file.to_superop().map_err(err)?.into())
    }

    fn to_json(&self) -> PyResult<String> {
        MapFile::from_superop(&self.inner).to_json().map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn kraus(&self) -> Option<Vec<Rows>> {
        self.inner.kraus().map(|ks| ks.iter().map(|k| rows_of(k.as_mat())).collect())
    }

    fn natural(&self) -> Rows {
        rows_of(self.inner.natural())
    }

    fn choi(&self) -> Rows {
        rows_of(&self.inner.to_choi())
    }

    fn apply(&self, a: Rows) -> PyResult<Rows> {
        let out = self.inner.apply(&to_cmatrix(&a)?).map_err(err)?;
        Ok(rows_of(out.as_mat()))
    }

    /// `self ∘ other`.
    fn compose(&self, other: &PySuperOp) -> PyResult<Self> {
        Ok(self.inner.compose(&other.inner).map_err(err)?.into())
    }

    fn power(&self, n: usize) -> Self {
        self.inner.power(n).into()
    }

    fn hs_adjoint(&self) -> Self {
        self.inner.hs_adjoint().into()
    }

    fn unital_defect(&self) -> f64 {
        self.inner.unital_defect()
    }

    fn trace_defect(&self) -> f64 {
        self.inner.trace_defect()
    }

    /// Returns `(phi_z, z, r)`.
    fn similarity_normalize(&self) -> PyResult<(Self, Rows, f64)> {
        let n = self.inner.similarity_normalize(&Tolerances::default()).map_err(err)?;
        Ok((n.map.into(), rows_of(n.z.as_mat()), n.radius))
    }

    fn __repr__(&self) -> String {
        let g = self.inner.kraus().map_or("none".to_string(), |k| k.len().to_string());
        format!("SuperOp(dim={}, kraus={g})", self.inner.dim())
    }
}

#[pyfunction]
fn depolarizing(dim: usize) -> PyResult<PySuperOp> {
    Ok(generators::depolarizing(dim).map_err(err)?.into())
}

#[pyfunction]
fn transpose(dim: usize) -> PyResult<PySuperOp> {
    Ok(generators::transpose(dim).map_err(err)?.into())
}

#[pyfunction]
fn wielandt_digraph(dim: usize) -> PyResult<PySuperOp> {
    Ok(generators::wielandt_digraph(dim).map_err(err)?.into())
}

#[pyfunction]
fn unitary_conj(u: Rows) -> PyResult<PySuperOp> {
    Ok(generators::unitary_conj(&to_cmatrix(&u)?).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (dim, kraus_count = 2, seed = 0))]
fn random_cp(dim: usize, kraus_count: usize, seed: u64) -> PyResult<PySuperOp> {
    Ok(generators::random_cp(dim, kraus_count, seed).map_err(err)?.into())
}

#[pyfunction]
#[pyo3(signature = (dim, kraus_count = 2, seed = 0))]
fn random_cp_unital(dim: usize, kraus_count: usize, seed: u64) -> PyResult<PySuperOp> {
    Ok(generators::random_cp_unital(dim, kraus_count, seed).map_err(err)?.map.into())
}

#[pyfunction]
fn classical_embedding(adjacency: Vec<Vec<u8>>) -> PyResult<PySuperOp> {
    Ok(generators::classical_embedding(&adjacency).map_err(err)?.into())
}

#[pyfunction]
fn classical_index(adjacency: Vec<Vec<u8>>) -> Option<usize> {
    generators::classical_index(&adjacency)
}

/// Returns `(map, provenance)`.
#[pyfunction]
#[pyo3(signature = (family, dim, kraus_count = 2, seed = 0))]
fn generate(py: Python<'_>, family: &str, dim: usize, kraus_count: usize, seed: u64) -> PyResult<(PySuperOp, Py<PyAny>)> {
    let f: Family = family.parse().map_err(err)?;
    let g = generators::generate(f, dim, kraus_count, seed).map_err(err)?;
    Ok((g.map.into(), to_py(py, &g.provenance)?))
}

#[pyfunction]
fn is_primitive(phi: &PySuperOp) -> PyResult<bool> {
    Ok(spectral::is_primitive(&phi.inner, &Tolerances::default()).map_err(err)?.primitive)
}

#[pyfunction]
fn spectral_certificate(py: Python<'_>, phi: &PySuperOp) -> PyResult<Py<PyAny>> {
    let cert = spectral::is_primitive(&phi.inner, &Tolerances::default()).map_err(err)?;
    to_py(py, &cert)
}

/// Full certificate of the index of primitivity as a dict.
#[pyfunction]
#[pyo3(signature = (phi, cap = None))]
fn primitivity_index(py: Python<'_>, phi: &PySuperOp, cap: Option<usize>) -> PyResult<Py<PyAny>> {
    let d = phi.inner.dim();
    let cap = cap.unwrap_or_else(|| primindex::default_cap(d));
    let cert = primindex::primitivity_index(&phi.inner, cap, &SearchBudget::default(), &Tolerances::default())
        .map_err(err)?;
    to_py(py, &cert)
}

#[derive(Serialize)]
struct KappaSummary {
    kappa: usize,
    ranks: Vec<usize>,
    bound: usize,
    tolerance_warning: bool,
}

/// Multiplicative-domain index of a primitive unital map.
#[pyfunction]
fn kappa(py: Python<'_>, phi: &PySuperOp) -> PyResult<Py<PyAny>> {
    let tol = Tolerances::default();
    let rho = spectral::spectral_data(&phi.inner, &tol).map_err(err)?.pf_left;
    let k = multdomain::kappa(&phi.inner, &rho, &tol).map_err(err)?;
    to_py(
        py,
        &KappaSummary {
            kappa: k.kappa,
            ranks: k.ranks(),
            bound: k.bound,
            tolerance_warning: k.tolerance_warning(),
        },
    )
}

#[pyfunction]
#[pyo3(signature = (matrices, cap = None))]
fn wielength(py: Python<'_>, matrices: Vec<Rows>, cap: Option<usize>) -> PyResult<Py<PyAny>> {
    let s = matrices.iter().map(to_cmatrix).collect::<PyResult<Vec<_>>>()?;
    let d = s.first().map_or(2, CMatrix::dim);
    let r = primindex::wielength(&s, cap.unwrap_or_else(|| primindex::fallback_cap(d)), &Tolerances::default())
        .map_err(err)?;
    to_py(py, &r)
}

/// The report produced by `wielandt analyze`, as a dict.
#[pyfunction]
#[pyo3(signature = (phi, cap = None))]
fn analyze(py: Python<'_>, phi: &PySuperOp, cap: Option<usize>) -> PyResult<Py<PyAny>> {
    let report = py.detach(|| analysis::analyze(&phi.inner, &options(cap)));
    to_py(py, &report)
}

#[pymodule]
fn wielandt_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WielandtError", m.py().get_type::<WielandtError>())?;
    m.add_class::<PySuperOp>()?;
    m.add_function(wrap_pyfunction!(depolarizing, m)?)?;
    m.add_function(wrap_pyfunction!(transpose, m)?)?;
    m.add_function(wrap_pyfunction!(wielandt_digraph, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_conj, m)?)?;
    m.add_function(wrap_pyfunction!(random_cp, m)?)?;
    m.add_function(wrap_pyfunction!(random_cp_unital, m)?)?;
    m.add_function(wrap_pyfunction!(classical_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(classical_index, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(is_primitive, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(primitivity_index, m)?)?;
    m.add_function(wrap_pyfunction!(kappa, m)?)?;
    m.add_function(wrap_pyfunction!(wielength, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    Ok(())
}
