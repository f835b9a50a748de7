//! Python bindings: rings and elements, the algebra `xy − ρyx = 1`, and every
//! certificate-producing operation (returned as plain dicts).

use std::sync::Arc;

use etalift::descent::{build_generic_descent, default_specializations, lift_without_rho};
use etalift::galois::{build_extension, build_gen_as_poly, lift_extension};
use etalift::identities::{appendix_identity_suite, SuiteConfig};
use etalift::qweyl::{self, QWeyl as CoreQWeyl, QWeylElem as CoreQElem, Strategy};
use etalift::ring::descriptor::{IdealDesc, RingDesc};
use etalift::ring::expr::parse_elem;
use etalift::{compute_eta_data, BaseRing, Error, Prime, RingCtx, RingElem, RingHom};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

fn err(e: Error) -> PyErr {
    match e {
        Error::Argument(_) | Error::Parse(_) | Error::Config(_) | Error::Json(_) => {
            PyValueError::new_err(e.to_string())
        }
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

fn prime(p: u32) -> PyResult<Prime> {
    Prime::new(p).map_err(err)
}

fn to_py(py: Python<'_>, v: &impl Serialize) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

/// A presented commutative `Z[ρ]`-algebra.
#[pyclass(name = "Ring", frozen)]
struct PyRing(Arc<RingCtx>);

#[pymethods]
impl PyRing {
    /// `Z[ρ]` for the prime `p`.
    #[staticmethod]
    fn integers(p: u32) -> PyResult<Self> {
        Ok(PyRing(RingCtx::coefficients(BaseRing::integers(prime(p)?))))
    }

    /// `Z[ρ]/(m, η^k, ρ − r)` with any of the generators omitted.
    #[staticmethod]
    #[pyo3(signature = (p, m=None, eta_power=None, rho=None))]
    fn quotient(p: u32, m: Option<i64>, eta_power: Option<u32>, rho: Option<i64>) -> PyResult<Self> {
        let base = BaseRing::quotient(prime(p)?, m, eta_power, rho).map_err(err)?;
        Ok(PyRing(RingCtx::coefficients(base)))
    }

    /// Build from a JSON ring descriptor.
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyRing(RingDesc::from_json(s).and_then(|d| d.build()).map_err(err)?))
    }

    fn parse(&self, expr: &str) -> PyResult<PyElem> {
        Ok(PyElem(parse_elem(&self.0, expr).map_err(err)?))
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.prime().get()
    }

    /// Number of elements, or None for infinite rings.
    #[getter]
    fn size(&self) -> Option<String> {
        self.0.size().map(|s| s.to_string())
    }

    fn one(&self) -> PyElem {
        PyElem(self.0.one())
    }

    fn zero(&self) -> PyElem {
        PyElem(self.0.zero())
    }

    fn rho(&self) -> PyElem {
        PyElem(self.0.rho())
    }

    fn eta(&self) -> PyElem {
        PyElem(self.0.eta())
    }

    fn __repr__(&self) -> String {
        format!("Ring({})", self.0.describe())
    }
}

#[pyclass(name = "Elem", frozen)]
struct PyElem(RingElem);

impl PyElem {
    fn binop(&self, other: &PyElem, f: impl Fn(&RingElem, &RingElem) -> etalift::Result<RingElem>) -> PyResult<PyElem> {
        Ok(PyElem(f(&self.0, &other.0).map_err(err)?))
    }
}

#[pymethods]
impl PyElem {
    fn __add__(&self, o: &PyElem) -> PyResult<PyElem> {
        self.binop(o, RingElem::checked_add)
    }

    fn __sub__(&self, o: &PyElem) -> PyResult<PyElem> {
        self.binop(o, RingElem::checked_sub)
    }

    fn __mul__(&self, o: &PyElem) -> PyResult<PyElem> {
        self.binop(o, RingElem::checked_mul)
    }

    fn __neg__(&self) -> PyElem {
        PyElem(-&self.0)
    }

    fn __pow__(&self, e: u64, _modulo: Option<Py<PyAny>>) -> PyElem {
        PyElem(self.0.pow(e))
    }

    fn __eq__(&self, o: &PyElem) -> PyResult<bool> {
        self.0.checked_eq(&o.0).map_err(err)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_unit(&self) -> PyResult<bool> {
        self.0.is_unit().map_err(err)
    }

    fn inverse(&self) -> PyResult<PyElem> {
        Ok(PyElem(self.0.inverse("element").map_err(err)?))
    }

    fn ring(&self) -> PyRing {
        PyRing(self.0.ctx().clone())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Elem({})", self.0)
    }
}

/// `xy − ρyx = 1` over `Z[ρ]`.
#[pyclass(name = "QWeyl", frozen)]
struct PyQWeyl(Arc<CoreQWeyl>);

#[pymethods]
impl PyQWeyl {
    #[new]
    fn new(p: u32) -> PyResult<Self> {
        Ok(PyQWeyl(CoreQWeyl::free(prime(p)?)))
    }

    fn word(&self, w: &str) -> PyResult<PyQElem> {
        Ok(PyQElem(CoreQElem::from_word(&self.0, w).map_err(err)?))
    }

    /// Normal form by literal rewriting (leftmost, rightmost, random[:seed]).
    #[pyo3(signature = (w, strategy="leftmost"))]
    fn rewrite(&self, w: &str, strategy: &str) -> PyResult<PyQElem> {
        let s: Strategy = strategy.parse().map_err(err)?;
        Ok(PyQElem(qweyl::rewrite_word(&self.0, w, s).map_err(err)?))
    }

    fn x(&self) -> PyQElem {
        PyQElem(CoreQElem::x(&self.0))
    }

    fn y(&self) -> PyQElem {
        PyQElem(CoreQElem::y(&self.0))
    }
}

#[pyclass(name = "QWeylElem", frozen)]
struct PyQElem(CoreQElem);

#[pymethods]
impl PyQElem {
    fn __add__(&self, o: &PyQElem) -> PyResult<PyQElem> {
        Ok(PyQElem(self.0.add(&o.0).map_err(err)?))
    }

    fn __sub__(&self, o: &PyQElem) -> PyResult<PyQElem> {
        Ok(PyQElem(self.0.sub(&o.0).map_err(err)?))
    }

    fn __mul__(&self, o: &PyQElem) -> PyResult<PyQElem> {
        Ok(PyQElem(self.0.mul(&o.0).map_err(err)?))
    }

    fn __pow__(&self, e: u32, _modulo: Option<Py<PyAny>>) -> PyResult<PyQElem> {
        Ok(PyQElem(self.0.pow(e).map_err(err)?))
    }

    fn __eq__(&self, o: &PyQElem) -> bool {
        self.0 == o.0
    }

    fn commutator(&self, o: &PyQElem) -> PyResult<PyQElem> {
        Ok(PyQElem(self.0.commutator(&o.0).map_err(err)?))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QWeylElem({})", self.0)
    }
}

#[pyfunction]
fn eta_data(py: Python<'_>, p: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &compute_eta_data(prime(p)?).map_err(err)?)
}

#[pyfunction]
fn gpoly(py: Python<'_>, p: u32) -> PyResult<Py<PyAny>> {
    to_py(py, &build_gen_as_poly(prime(p)?).map_err(err)?.report())
}

#[pyfunction]
#[pyo3(signature = (p, samples=20, seed=0, symbolic=true))]
fn identities(py: Python<'_>, p: u32, samples: usize, seed: u64, symbolic: bool) -> PyResult<Py<PyAny>> {
    let cfg = SuiteConfig { samples, seed, symbolic, ..SuiteConfig::default() };
    let r = py.detach(|| appendix_identity_suite(prime(p)?, &cfg).map_err(err))?;
    to_py(py, &r)
}

#[pyfunction]
fn galois_build(py: Python<'_>, a: &PyElem) -> PyResult<Py<PyAny>> {
    let ext = build_extension(a.0.ctx(), &a.0).map_err(err)?;
    to_py(py, &ext.certificate)
}

/// Lift the extension with parameter `a` (in `target`) along the canonical map `source → target`.
#[pyfunction]
fn galois_lift(py: Python<'_>, source: &PyRing, a: &PyElem) -> PyResult<Py<PyAny>> {
    let h = RingHom::canonical(&source.0, a.0.ctx()).map_err(err)?;
    let target = build_extension(a.0.ctx(), &a.0).map_err(err)?;
    to_py(py, &lift_extension(&h, &target).map_err(err)?.1)
}

#[pyfunction]
#[pyo3(signature = (p, symbolic=None))]
fn descent_build(py: Python<'_>, p: u32, symbolic: Option<bool>) -> PyResult<Py<PyAny>> {
    let pr = prime(p)?;
    let specs = default_specializations(pr).map_err(err)?;
    let (_, r) = build_generic_descent(pr, symbolic.unwrap_or(p <= 3), &specs).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn descent_lift(py: Python<'_>, source: &PyRing, a: &PyElem) -> PyResult<Py<PyAny>> {
    to_py(py, &lift_without_rho(&source.0, a.0.ctx(), &a.0).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (p, samples=20, seed=0))]
fn qweyl_center(py: Python<'_>, p: u32, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    to_py(py, &qweyl::verify_center(prime(p)?, samples, seed).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (p, symbolic=false, q=7))]
fn azumaya(py: Python<'_>, p: u32, symbolic: bool, q: u64) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| qweyl::azumaya_det(prime(p)?, symbolic, q, None).map_err(err))?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (p, samples=50, seed=0))]
fn dcp_sweep(py: Python<'_>, p: u32, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    to_py(py, &qweyl::dcp_sweep(prime(p)?, samples, seed).map_err(err)?)
}

/// Lift `[c, b]` over `R/I` to `R`; `ring` and `ideal` are JSON descriptors.
#[pyfunction]
fn brauer_lift(py: Python<'_>, ring: &str, ideal: &str, c: &str, b: &str) -> PyResult<Py<PyAny>> {
    let rd = RingDesc::from_json(ring).map_err(err)?;
    let id: IdealDesc = serde_json::from_str(ideal).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let src = rd.build().map_err(err)?;
    let tgt = id.quotient_of(&rd).and_then(|d| d.build()).map_err(err)?;
    let h = RingHom::canonical(&src, &tgt).map_err(err)?;
    let c = parse_elem(&tgt, c).map_err(err)?;
    let b = parse_elem(&tgt, b).map_err(err)?;
    to_py(py, &qweyl::brauer_lift_demo(&h, &c, &b).map_err(err)?)
}

#[pymodule]
pub fn etalift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRing>()?;
    m.add_class::<PyElem>()?;
    m.add_class::<PyQWeyl>()?;
    m.add_class::<PyQElem>()?;
    m.add_function(wrap_pyfunction!(eta_data, m)?)?;
    m.add_function(wrap_pyfunction!(gpoly, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(galois_build, m)?)?;
    m.add_function(wrap_pyfunction!(galois_lift, m)?)?;
    m.add_function(wrap_pyfunction!(descent_build, m)?)?;
    m.add_function(wrap_pyfunction!(descent_lift, m)?)?;
    m.add_function(wrap_pyfunction!(qweyl_center, m)?)?;
    m.add_function(wrap_pyfunction!(azumaya, m)?)?;
    m.add_function(wrap_pyfunction!(dcp_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(brauer_lift, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
