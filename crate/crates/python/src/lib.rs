//! Python bindings for the modfol library.

use modfol::eisenstein::{self, PathWitness};
use modfol::flows::{self, FieldHandle, FlowOptions, Quantity};
use modfol::gauss_manin::{foliation_from_form, FormSpec};
use modfol::periods::{self, Point3};
use modfol::suite::{self, SuiteKind};
use modfol::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn numeric_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyArithmeticError::new_err(e.to_string())
}

fn point(t: (Complex64, Complex64, Complex64)) -> Point3 {
    [t.0, t.1, t.2]
}

fn tuple(t: &Point3) -> (Complex64, Complex64, Complex64) {
    (t[0], t[1], t[2])
}

/// Normalized (or raw) period matrix `[[x1, x2], [x3, x4]]`.
#[pyclass(name = "PeriodMatrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPeriodMatrix {
    inner: periods::PeriodMatrix,
}

#[pymethods]
impl PyPeriodMatrix {
    #[new]
    #[pyo3(signature = (x1, x2, x3, x4, normalized = true))]
    fn new(x1: Complex64, x2: Complex64, x3: Complex64, x4: Complex64, normalized: bool) -> Self {
        PyPeriodMatrix {
            inner: periods::PeriodMatrix::new([x1, x2, x3, x4], normalized),
        }
    }

    #[staticmethod]
    fn standard(z: Complex64) -> Self {
        PyPeriodMatrix {
            inner: periods::PeriodMatrix::standard(z),
        }
    }

    #[getter]
    fn entries(&self) -> [Complex64; 4] {
        self.inner.x
    }

    #[getter]
    fn normalized(&self) -> bool {
        self.inner.normalized
    }

    fn det(&self) -> Complex64 {
        self.inner.det()
    }

    fn tau(&self) -> Complex64 {
        self.inner.tau()
    }

    fn b_dxy(&self) -> f64 {
        self.inner.b_dxy()
    }

    fn b_xdxy(&self) -> f64 {
        self.inner.b_xdxy()
    }

    fn b_mixed(&self) -> Complex64 {
        self.inner.b_mixed()
    }

    fn monodromy(&self, a: [[i64; 2]; 2]) -> PyResult<Self> {
        let inner = periods::monodromy_apply(&self.inner, &a).map_err(value_err)?;
        Ok(PyPeriodMatrix { inner })
    }

    /// Returns `(A, P')` with `P' = A P` in reduced form.
    fn sl2z_reduce(&self) -> PyResult<([[i64; 2]; 2], Self)> {
        let (a, inner) = periods::sl2z_reduce(&self.inner).map_err(numeric_err)?;
        Ok((a, PyPeriodMatrix { inner }))
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn inverse(&self, tol: f64) -> PyResult<(Complex64, Complex64, Complex64)> {
        let t = periods::inverse_period(&self.inner, tol).map_err(numeric_err)?;
        Ok(tuple(&t))
    }

    fn __repr__(&self) -> String {
        let x = self.inner.x;
        format!("PeriodMatrix([[{}, {}], [{}, {}]])", x[0], x[1], x[2], x[3])
    }
}

#[pyfunction]
#[pyo3(signature = (t, tol = 1e-12, raw = false))]
fn period_matrix(t: (Complex64, Complex64, Complex64), tol: f64, raw: bool) -> PyResult<PyPeriodMatrix> {
    let t = point(t);
    let inner = if raw {
        periods::raw_period_matrix(&t, tol).map_err(numeric_err)?.0
    } else {
        periods::period_matrix(&t, tol).map_err(numeric_err)?
    };
    Ok(PyPeriodMatrix { inner })
}

#[pyfunction]
#[pyo3(signature = (t, tol = 1e-10))]
fn leaf(t: (Complex64, Complex64, Complex64), tol: f64) -> PyResult<(String, f64, f64, Complex64, Complex64)> {
    let info = periods::leaf_classify(&point(t), tol).map_err(numeric_err)?;
    Ok((
        info.classification.as_str().to_string(),
        info.b_dxy,
        info.b_xdxy,
        info.b_mixed,
        info.tau,
    ))
}

#[pyfunction]
#[pyo3(signature = (z, tol = 1e-14, derivative = false))]
fn eisenstein_eval(z: Complex64, tol: f64, derivative: bool) -> PyResult<(Complex64, Complex64, Complex64)> {
    let e = if derivative {
        eisenstein::eisenstein_derivative_eval(z, tol)
    } else {
        eisenstein::eisenstein_eval(z, tol)
    }
    .map_err(value_err)?;
    Ok(tuple(&e.g))
}

#[pyfunction]
#[pyo3(signature = (z, tol = 1e-14))]
fn theta_eval(z: Complex64, tol: f64) -> PyResult<(Complex64, Complex64, Complex64)> {
    let th = eisenstein::theta_eval(z, tol, &PathWitness::from_i(z)).map_err(value_err)?;
    Ok(tuple(&th.theta))
}

/// Components of the vector field annihilated by `dp1`, `dp2` and the
/// Weierstrass 1-form, as polynomial strings.
#[pyfunction]
fn foliation(p1: &str, p2: &str) -> PyResult<Vec<String>> {
    let form = FormSpec::parse(p1, p2).map_err(value_err)?;
    let f = foliation_from_form(&form).map_err(value_err)?;
    Ok(f.components().iter().map(|c| c.to_string()).collect())
}

/// Integrates `ra`, `dh` or `restricted` along `exp(i phase) R_{>=0}`.
/// Returns the samples and, if requested, the drift of the monitored
/// quantity.
#[pyfunction]
#[pyo3(signature = (field, start, length, phase_deg = 0.0, tol = 1e-10, monitor = None))]
fn flow(
    field: &str,
    start: (Complex64, Complex64, Complex64),
    length: f64,
    phase_deg: f64,
    tol: f64,
    monitor: Option<&str>,
) -> PyResult<(Vec<(f64, (Complex64, Complex64, Complex64))>, Option<f64>)> {
    let handle = match field {
        "ra" => FieldHandle::Ra,
        "dh" => FieldHandle::Dh,
        "restricted" => FieldHandle::RestrictedDelta0,
        other => return Err(PyValueError::new_err(format!("unknown field {other:?}"))),
    };
    let phase = Complex64::from_polar(1.0, phase_deg.to_radians());
    let mut traj =
        flows::integrate_field(&handle, &point(start), phase, length, &FlowOptions::new(tol)).map_err(numeric_err)?;
    let drift = match monitor {
        None => None,
        Some(m) => {
            let q = match m {
                "b-xdxy" => Quantity::BXdxy,
                "b-mixed-abs" => Quantity::BMixedAbs,
                "delta0" => Quantity::Delta0FirstIntegral,
                other => return Err(PyValueError::new_err(format!("unknown monitor {other:?}"))),
            };
            Some(flows::conservation_monitor(&mut traj, q, 1e-13).map_err(numeric_err)?)
        }
    };
    let samples = traj.samples.iter().map(|(s, t)| (*s, tuple(t))).collect();
    Ok((samples, drift))
}

/// Runs a verification suite and returns the JSON report.
#[pyfunction]
#[pyo3(signature = (suite = "all", tol = 1e-6, seed = 42))]
fn verify(suite: &str, tol: f64, seed: u64) -> PyResult<String> {
    let kind = SuiteKind::parse(suite).ok_or_else(|| PyValueError::new_err(format!("unknown suite {suite:?}")))?;
    Ok(suite::report_json(&suite::run_suite(kind, tol, seed)))
}

#[pymodule]
fn modfol_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPeriodMatrix>()?;
    m.add_function(wrap_pyfunction!(period_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(leaf, m)?)?;
    m.add_function(wrap_pyfunction!(eisenstein_eval, m)?)?;
    m.add_function(wrap_pyfunction!(theta_eval, m)?)?;
    m.add_function(wrap_pyfunction!(foliation, m)?)?;
    m.add_function(wrap_pyfunction!(flow, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
