//! Python bindings. Structured results cross the boundary as plain dicts
//! (serialized through JSON); polynomials come back as `LaurentPoly`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};
use serde::Serialize;

use mopuc::zeros::{self, Tolerances};
use mopuc::{measure, para, presets, solver, Error, HalfLaurentPoly, MultiIndex, ScanMode, SystemDescription};

create_exception!(mopuc_py, MopucError, PyValueError);
create_exception!(mopuc_py, NonNormalError, MopucError);
create_exception!(mopuc_py, TheoremViolatedError, MopucError);

fn err(e: Error) -> PyErr {
    match e {
        Error::NonNormal { .. } => NonNormalError::new_err(e.to_string()),
        Error::TheoremViolated { .. } => TheoremViolatedError::new_err(e.to_string()),
        Error::ZeroArgument => PyZeroDivisionError::new_err(e.to_string()),
        other => MopucError::new_err(other.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| MopucError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn index(entries: Vec<usize>) -> MultiIndex {
    MultiIndex::new(entries)
}

#[pyclass(name = "MeasureSystem", module = "mopuc_py", frozen)]
struct PyMeasureSystem {
    inner: mopuc::MeasureSystem,
}

#[pymethods]
impl PyMeasureSystem {
    /// Named system: SYS-LEB, SYS-BS:<a>, SYS-A2 or SYS-AT2.
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(PyMeasureSystem { inner: presets::preset(name).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = SystemDescription::from_json(text).and_then(|d| d.build()).map_err(err)?;
        Ok(PyMeasureSystem { inner })
    }

    fn to_json(&self) -> String {
        SystemDescription::from_system(&self.inner).to_json()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn t0(&self) -> f64 {
        self.inner.t0()
    }

    #[getter]
    fn tag(&self) -> String {
        serde_json::to_value(self.inner.tag())
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }

    /// `∫ e^{i t θ} dμ_j` for `t = two_t / 2`.
    fn moment(&self, j: usize, two_t: i64) -> PyResult<Complex64> {
        self.inner.moment(j, two_t).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("MeasureSystem(r={}, t0={}, tag={:?})", self.inner.r(), self.inner.t0(), self.tag())
    }
}

#[pyclass(name = "LaurentPoly", module = "mopuc_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLaurentPoly {
    inner: HalfLaurentPoly,
}

#[pymethods]
impl PyLaurentPoly {
    /// Coefficients of `z^{two_min/2}, z^{two_min/2 + 1}, ...`.
    #[new]
    fn new(two_min: i64, coeffs: Vec<Complex64>) -> Self {
        PyLaurentPoly { inner: HalfLaurentPoly::new(two_min, coeffs) }
    }

    #[getter]
    fn two_min(&self) -> i64 {
        self.inner.two_min()
    }

    #[getter]
    fn two_max(&self) -> i64 {
        self.inner.two_max()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    /// Coefficient of `z^{two_exp/2}`.
    fn coeff(&self, two_exp: i64) -> Complex64 {
        self.inner.coeff(two_exp)
    }

    /// Value at `z`, half-integer powers taken on the branch starting at `t0`.
    #[pyo3(signature = (z, t0 = 0.0))]
    fn eval(&self, z: Complex64, t0: f64) -> PyResult<Complex64> {
        self.inner.eval(z, mopuc::Branch::new(t0)).map_err(err)
    }

    fn sharp(&self) -> Self {
        PyLaurentPoly { inner: self.inner.sharp() }
    }

    fn __repr__(&self) -> String {
        format!("LaurentPoly({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Serializes `value` to a dict and swaps the `poly` entry for a `LaurentPoly`.
fn with_poly<'py, T: Serialize>(py: Python<'py>, value: &T, poly: &HalfLaurentPoly, key: &str) -> PyResult<Bound<'py, PyAny>> {
    let obj = to_py(py, value)?;
    let dict = obj.cast::<PyDict>()?;
    dict.set_item(key, Py::new(py, PyLaurentPoly { inner: poly.clone() })?)?;
    Ok(obj)
}

fn tolerances(tol_circle: Option<f64>) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = tol_circle {
        tol.tol_circle = t;
    }
    tol
}

/// Laurent multiple orthogonal polynomial `φ_n` (or its sharp).
#[pyfunction]
#[pyo3(signature = (system, n, sharp = false))]
fn solve_phi<'py>(py: Python<'py>, system: &PyMeasureSystem, n: Vec<usize>, sharp: bool) -> PyResult<Bound<'py, PyAny>> {
    let n = index(n);
    let r = if sharp {
        solver::solve_phi_sharp(&system.inner, &n)
    } else {
        solver::solve_phi(&system.inner, &n)
    }
    .map_err(err)?;
    with_poly(py, &r, &r.poly, "poly")
}

/// Two-point Hermite–Padé polynomial `Φ_{n,m}` (or `Φ*_{n,m}` with `star`).
#[pyfunction]
#[pyo3(signature = (system, n, m, star = false))]
fn solve_hp<'py>(
    py: Python<'py>,
    system: &PyMeasureSystem,
    n: Vec<usize>,
    m: Vec<usize>,
    star: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (n, m) = (index(n), index(m));
    let r = if star {
        solver::solve_hp_star(&system.inner, &n, &m)
    } else {
        solver::solve_hp(&system.inner, &n, &m)
    }
    .map_err(err)?;
    with_poly(py, &r, &r.poly, "poly")
}

/// Paraorthogonal polynomial `X_n^(τ)` with its trigonometric form.
#[pyfunction]
fn build_para<'py>(py: Python<'py>, system: &PyMeasureSystem, n: Vec<usize>, tau: Complex64) -> PyResult<Bound<'py, PyAny>> {
    let n = index(n);
    let phi = solver::solve_phi(&system.inner, &n).map_err(err)?.poly;
    let p = para::build_para(&phi, tau).and_then(|p| p.with_trig(system.inner.branch())).map_err(err)?;
    with_poly(py, &p, &p.x, "x")
}

/// Zero report of `z^{|n|/2} φ_n`, or of `X_n^(τ)` when `tau` is given.
#[pyfunction]
#[pyo3(signature = (system, n, tau = None, tol_circle = None))]
fn zero_report<'py>(
    py: Python<'py>,
    system: &PyMeasureSystem,
    n: Vec<usize>,
    tau: Option<Complex64>,
    tol_circle: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let n = index(n);
    let tol = tolerances(tol_circle);
    let phi = solver::solve_phi(&system.inner, &n).map_err(err)?.poly;
    let poly = match tau {
        Some(t) => para::build_para(&phi, t).map_err(err)?.x,
        None => phi,
    };
    to_py(py, &zeros::zero_report(&system.inner, &poly, tol.tol_circle).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (system, max_index, mode = "phi"))]
fn normality_scan<'py>(py: Python<'py>, system: &PyMeasureSystem, max_index: usize, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    let mode: ScanMode = mode.parse().map_err(err)?;
    to_py(py, &solver::normality_scan(&system.inner, max_index, mode).map_err(err)?)
}

/// Verdict dict for the zeros-in-the-disk theorem; `strict` raises on failure.
#[pyfunction]
#[pyo3(signature = (system, n, tol_circle = None, strict = false))]
fn verify_thm5_1<'py>(
    py: Python<'py>,
    system: &PyMeasureSystem,
    n: Vec<usize>,
    tol_circle: Option<f64>,
    strict: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let v = zeros::verify_thm5_1(&system.inner, &index(n), &tolerances(tol_circle)).map_err(err)?;
    if strict {
        v.ensure().map_err(err)?;
    }
    to_py(py, &v)
}

/// One verdict per τ for the paraorthogonal zero theorems.
#[pyfunction]
#[pyo3(signature = (system, n, taus, tol_circle = None, strict = false))]
fn verify_para<'py>(
    py: Python<'py>,
    system: &PyMeasureSystem,
    n: Vec<usize>,
    taus: Vec<Complex64>,
    tol_circle: Option<f64>,
    strict: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let vs = zeros::verify_para_theorems(&system.inner, &index(n), &taus, &tolerances(tol_circle)).map_err(err)?;
    if strict {
        for v in &vs {
            v.ensure().map_err(err)?;
        }
    }
    to_py(py, &vs)
}

#[pyfunction]
#[pyo3(signature = (system, max_index, strict = false))]
fn verify_thm5_2<'py>(py: Python<'py>, system: &PyMeasureSystem, max_index: usize, strict: bool) -> PyResult<Bound<'py, PyAny>> {
    let vs = zeros::verify_thm5_2(&system.inner, max_index, &Tolerances::default()).map_err(err)?;
    if strict {
        for v in &vs {
            v.ensure().map_err(err)?;
        }
    }
    to_py(py, &vs)
}

#[pyfunction]
#[pyo3(signature = (system, n, trials = 200, seed = 0))]
fn chebyshev_check<'py>(
    py: Python<'py>,
    system: &PyMeasureSystem,
    n: Vec<usize>,
    trials: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &measure::chebyshev_check(&system.inner, &index(n), trials, seed).map_err(err)?)
}

/// Equispaced unimodular τ values.
#[pyfunction]
fn equispaced_taus(k: usize) -> Vec<Complex64> {
    para::equispaced_taus(k)
}

#[pymodule]
fn mopuc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyMeasureSystem>()?;
    m.add_class::<PyLaurentPoly>()?;
    m.add("MopucError", py.get_type::<MopucError>())?;
    m.add("NonNormalError", py.get_type::<NonNormalError>())?;
    m.add("TheoremViolatedError", py.get_type::<TheoremViolatedError>())?;
    m.add_function(wrap_pyfunction!(solve_phi, m)?)?;
    m.add_function(wrap_pyfunction!(solve_hp, m)?)?;
    m.add_function(wrap_pyfunction!(build_para, m)?)?;
    m.add_function(wrap_pyfunction!(zero_report, m)?)?;
    m.add_function(wrap_pyfunction!(normality_scan, m)?)?;
    m.add_function(wrap_pyfunction!(verify_thm5_1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_para, m)?)?;
    m.add_function(wrap_pyfunction!(verify_thm5_2, m)?)?;
    m.add_function(wrap_pyfunction!(chebyshev_check, m)?)?;
    m.add_function(wrap_pyfunction!(equispaced_taus, m)?)?;
    Ok(())
}
