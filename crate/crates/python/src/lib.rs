//! Python bindings: polynomials, rewrite plans, compilation, verification and the scheme tables.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cvdecomp::compiler::{self, CompileOptions};
use cvdecomp::fock::{self, FockSpace};
use cvdecomp::rewrite;
use cvdecomp::sequence;
use cvdecomp::solver::{self, Family, NaiveKind};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn from_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn family(name: &str) -> PyResult<Family> {
    match name {
        "commutator" => Ok(Family::Commutator),
        "nested" => Ok(Family::Nested),
        other => Err(value_err(format!("unknown family {other:?}"))),
    }
}

/// Exact polynomial in the quadratures `Xk`, `Pk` with `[X, P] = i/2`.
#[pyclass(name = "Polynomial", module = "cvdecomp")]
struct Polynomial {
    inner: cvdecomp::QuadPolynomial,
}

#[pymethods]
impl Polynomial {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        cvdecomp::parse_polynomial(text).map(|inner| Self { inner }).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }

    fn __add__(&self, other: PyRef<'_, Self>) -> Self {
        Self { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: PyRef<'_, Self>) -> Self {
        Self { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: PyRef<'_, Self>) -> Self {
        Self { inner: self.inner.mul(&other.inner) }
    }

    fn commutator(&self, other: PyRef<'_, Self>) -> Self {
        Self { inner: self.inner.commutator(&other.inner) }
    }

    fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    fn is_hermitian(&self) -> bool {
        self.inner.is_hermitian()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.total_degree()
    }

    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.active_modes()
    }

    /// Rewrite plan as printable lines; its expansion reproduces the polynomial exactly.
    fn plan(&self) -> PyResult<Vec<String>> {
        let p = rewrite::plan(&self.inner).map_err(value_err)?;
        if p.expand() != self.inner {
            return Err(runtime_err("plan does not expand to its input"));
        }
        Ok(p.to_string().lines().map(str::to_owned).collect())
    }
}

/// Ordered list of native gates.
#[pyclass(name = "GateSequence", module = "cvdecomp")]
struct GateSequence {
    inner: sequence::GateSequence,
}

#[pymethods]
impl GateSequence {
    #[staticmethod]
    fn from_jsonl(text: &str) -> PyResult<Self> {
        sequence::GateSequence::from_json_lines(text).map(|inner| Self { inner }).map_err(value_err)
    }

    fn to_jsonl(&self) -> String {
        self.inner.to_json_lines()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("GateSequence(modes={}, gates={})", self.inner.n_modes, self.inner.len())
    }

    fn counts(&self) -> BTreeMap<String, usize> {
        self.inner.counts().into_iter().map(|(k, v)| (k.name().to_owned(), v)).collect()
    }

    #[getter]
    fn fourier_count(&self) -> usize {
        self.inner.fourier_count()
    }

    #[getter]
    fn global_phase(&self) -> f64 {
        self.inner.global_phase
    }

    /// Distance to `exp(i t H)` on the lowest `subspace` Fock states of each mode.
    #[pyo3(signature = (h, t, fock_dim=None, subspace=fock::DEFAULT_SUBSPACE))]
    fn distance(&self, h: PyRef<'_, Polynomial>, t: f64, fock_dim: Option<usize>, subspace: usize) -> PyResult<f64> {
        let modes = self.inner.n_modes.max(h.inner.active_modes()).max(1);
        let space = match fock_dim {
            Some(n) => FockSpace::new(n, modes),
            None => FockSpace::default_for(modes),
        }
        .map_err(value_err)?;
        let mut seq = self.inner.clone();
        seq.n_modes = modes;
        fock::sequence_distance(&space, &seq, &h.inner, t, subspace).map_err(runtime_err)
    }
}

/// Compiles `exp(i t H)`; returns the sequence and the report as a dict.
#[pyfunction]
#[pyo3(signature = (h, t, budget, split_order=2, scheme_order=None))]
fn compile<'py>(
    py: Python<'py>,
    h: PyRef<'_, Polynomial>,
    t: f64,
    budget: f64,
    split_order: u32,
    scheme_order: Option<u32>,
) -> PyResult<(GateSequence, Bound<'py, PyAny>)> {
    let opts = CompileOptions { split_order, scheme_order };
    let (seq, report) = compiler::compile_with(&h.inner, t, budget, &opts).map_err(value_err)?;
    Ok((GateSequence { inner: seq }, from_json(py, &report.to_json())?))
}

/// Cheapest library scheme for one component: `(name, order, gates, rescale, predicted_error)`.
#[pyfunction]
fn choose_order(strength: f64, budget: f64, family_name: &str) -> PyResult<(String, u32, usize, u32, f64)> {
    let c = compiler::choose_order(strength, budget, family(family_name)?).map_err(value_err)?;
    Ok((c.scheme.name.clone(), c.scheme.order, c.gate_count(), c.rescale, c.predicted_error))
}

/// Gate count of the rescaled group-commutator baseline.
#[pyfunction]
fn naive_count(family_name: &str, strength: f64, budget: f64) -> PyResult<f64> {
    let kind = match family(family_name)? {
        Family::Commutator => NaiveKind::Commutator,
        Family::Nested => NaiveKind::Nested,
    };
    Ok(solver::naive_count(kind, strength, budget))
}

/// Refines a shipped coefficient table; returns the refined scheme as TOML and its residual.
#[pyfunction]
fn refine_table(name: &str) -> PyResult<(String, f64)> {
    let fixture = solver::table(name).map_err(value_err)?;
    let scheme = if fixture.is_second_step() {
        let base_name = fixture.base.clone().ok_or_else(|| runtime_err("second-step table without base"))?;
        let base =
            solver::refine_first_step(&solver::table(&base_name).map_err(value_err)?).map_err(runtime_err)?.scheme;
        solver::refine_second_step(&fixture, &base, 1e-8).map_err(runtime_err)?.scheme
    } else {
        solver::refine_first_step(&fixture).map_err(runtime_err)?.scheme
    };
    let residual = solver::verify_scheme(&scheme).max_residual;
    Ok((scheme.to_toml(), residual))
}

#[pymodule]
#[pyo3(name = "cvdecomp")]
fn cvdecomp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polynomial>()?;
    m.add_class::<GateSequence>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(choose_order, m)?)?;
    m.add_function(wrap_pyfunction!(naive_count, m)?)?;
    m.add_function(wrap_pyfunction!(refine_table, m)?)?;
    Ok(())
}
