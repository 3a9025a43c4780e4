//! Python bindings: parameter bundles, node sets, basis evaluation,
//! Erdélyi–Kober differentiation matrices, and the benchmark solvers.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use muntz_spectral::diffmat::{
    condition_number, condition_number_1norm, dm_power, ek_dm_direct, ek_dm_stable,
    first_order_dm, second_order_dm, v_inverse_closed, DmSide, FirstOrderFamily,
};
use muntz_spectral::experiments;
use muntz_spectral::interp::{
    eval_interpolant, GridFunction, InterpolantKind, LmfVariant, MuntzNodeSet,
};
use muntz_spectral::jacobi::JacobiParams;
use muntz_spectral::jacobi_muntz::{ek_deriv_jmf_closed, eval_jmf, JmfKind, JmfSpec};
use muntz_spectral::linalg::DenseMatrix;
use muntz_spectral::quadrature::{gjmqr_weights, mapped_rule, GjmqrVariant, MuntzBasisParams};
use muntz_spectral::MuntzError;

fn to_py(e: MuntzError) -> PyErr {
    match e {
        MuntzError::Validation(_) | MuntzError::InvalidParam(_) | MuntzError::Domain(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_kind(kind: &str) -> PyResult<JmfKind> {
    match kind {
        "first" => Ok(JmfKind::First),
        "second" => Ok(JmfKind::Second),
        other => Err(PyValueError::new_err(format!(
            "kind must be 'first' or 'second', got '{other}'"
        ))),
    }
}

fn parse_side(side: &str) -> PyResult<DmSide> {
    match side {
        "left" => Ok(DmSide::Left),
        "right" => Ok(DmSide::Right),
        other => Err(PyValueError::new_err(format!(
            "side must be 'left' or 'right', got '{other}'"
        ))),
    }
}

fn parse_family(family: &str) -> PyResult<FirstOrderFamily> {
    match family {
        "power" => Ok(FirstOrderFamily::PowerBasis),
        "cutoff" => Ok(FirstOrderFamily::CutoffBasis),
        other => Err(PyValueError::new_err(format!(
            "family must be 'power' or 'cutoff', got '{other}'"
        ))),
    }
}

fn parse_interp_kind(kind: &str) -> PyResult<InterpolantKind> {
    match kind {
        "mji" => Ok(InterpolantKind::Mji),
        "njmi1" => Ok(InterpolantKind::Njmi1),
        "njmi2" => Ok(InterpolantKind::Njmi2),
        other => Err(PyValueError::new_err(format!(
            "kind must be 'mji', 'njmi1' or 'njmi2', got '{other}'"
        ))),
    }
}

fn matrix_to_rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<f64>>) -> PyResult<DenseMatrix> {
    DenseMatrix::from_rows(rows).map_err(to_py)
}

/// Parameter bundle (α, β, σ, η, μ, b) shared by every construction.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct MuntzParams {
    inner: MuntzBasisParams,
}

#[pymethods]
impl MuntzParams {
    #[new]
    #[pyo3(signature = (alpha, beta, sigma, eta=0.0, mu=0.0, b=1.0))]
    fn new(alpha: f64, beta: f64, sigma: f64, eta: f64, mu: f64, b: f64) -> PyResult<Self> {
        let jac = JacobiParams::new(alpha, beta).map_err(to_py)?;
        Ok(Self {
            inner: MuntzBasisParams::new(jac, sigma, eta, mu, b).map_err(to_py)?,
        })
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.jac.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.jac.beta
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }

    /// Leading exponent σ(β - η - μ) of the first-kind basis.
    fn first_kind_exponent(&self) -> f64 {
        self.inner.first_kind_exponent()
    }

    fn __repr__(&self) -> String {
        format!(
            "MuntzParams(alpha={}, beta={}, sigma={}, eta={}, mu={}, b={})",
            self.inner.jac.alpha,
            self.inner.jac.beta,
            self.inner.sigma,
            self.inner.eta,
            self.inner.mu,
            self.inner.b
        )
    }
}

/// Mapped collocation nodes with the cardinal-function machinery and the
/// differentiation matrices built on them.
#[pyclass]
struct NodeSet {
    inner: Arc<MuntzNodeSet>,
}

#[pymethods]
impl NodeSet {
    #[new]
    fn new(params: &MuntzParams, n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: MuntzNodeSet::new(n, params.inner).map_err(to_py)?,
        })
    }

    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().to_vec()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    /// Cardinal function h_r^σ at x.
    fn h_sigma(&self, r: usize, x: f64) -> PyResult<f64> {
        self.inner.eval_h_sigma(r, x).map_err(to_py)
    }

    /// First- or second-kind Lagrange–Müntz cardinal function at x.
    fn lagrange(&self, r: usize, kind: &str, x: f64) -> PyResult<f64> {
        let variant = match kind {
            "first" => LmfVariant::First,
            "second" => LmfVariant::Second,
            other => {
                return Err(PyValueError::new_err(format!(
                    "kind must be 'first' or 'second', got '{other}'"
                )))
            }
        };
        self.inner.eval_lmf(r, variant, x).map_err(to_py)
    }

    /// Evaluate the selected interpolant of nodal values at query points.
    fn interpolate(&self, kind: &str, values: Vec<f64>, xs: Vec<f64>) -> PyResult<Vec<f64>> {
        let kind = parse_interp_kind(kind)?;
        let gf = GridFunction::new(self.inner.clone(), values).map_err(to_py)?;
        xs.into_iter()
            .map(|x| eval_interpolant(kind, &gf, x).map_err(to_py))
            .collect()
    }

    /// Erdélyi–Kober fractional differentiation matrix of order mu.
    #[pyo3(signature = (side, mu, approach="stable"))]
    fn ek_diffmat(&self, side: &str, mu: f64, approach: &str) -> PyResult<Vec<Vec<f64>>> {
        let side = parse_side(side)?;
        let d = match approach {
            "stable" => ek_dm_stable(side, &self.inner, mu),
            "direct" => ek_dm_direct(side, &self.inner, mu),
            other => {
                return Err(PyValueError::new_err(format!(
                    "approach must be 'stable' or 'direct', got '{other}'"
                )))
            }
        }
        .map_err(to_py)?;
        Ok(matrix_to_rows(&d))
    }

    /// First-order differentiation matrix for the 'power' or 'cutoff'
    /// cardinal family.
    fn first_order_dm(&self, family: &str) -> PyResult<Vec<Vec<f64>>> {
        let d = first_order_dm(parse_family(family)?, &self.inner).map_err(to_py)?;
        Ok(matrix_to_rows(&d))
    }

    /// Directly assembled second-order differentiation matrix.
    fn second_order_dm(&self, family: &str) -> PyResult<Vec<Vec<f64>>> {
        let d = second_order_dm(parse_family(family)?, &self.inner).map_err(to_py)?;
        Ok(matrix_to_rows(&d))
    }

    /// Closed-form inverse of the basis Vandermonde.
    fn v_inverse(&self, side: &str) -> PyResult<Vec<Vec<f64>>> {
        Ok(matrix_to_rows(&v_inverse_closed(
            parse_side(side)?,
            &self.inner,
        )))
    }
}

/// Quadrature nodes and weights: 'base', 'gjmqr1' or 'gjmqr2'.
#[pyfunction]
#[pyo3(signature = (params, n, rule="base"))]
fn quad_rule(params: &MuntzParams, n: usize, rule: &str) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let base = mapped_rule(n, params.inner).map_err(to_py)?;
    let r = match rule {
        "base" => base,
        "gjmqr1" => gjmqr_weights(&base, GjmqrVariant::First).map_err(to_py)?,
        "gjmqr2" => gjmqr_weights(&base, GjmqrVariant::Second).map_err(to_py)?,
        other => {
            return Err(PyValueError::new_err(format!(
                "rule must be 'base', 'gjmqr1' or 'gjmqr2', got '{other}'"
            )))
        }
    };
    Ok((r.nodes, r.weights))
}

/// Jacobi–Müntz basis function value.
#[pyfunction]
fn jmf(kind: &str, degree: usize, params: &MuntzParams, x: f64) -> PyResult<f64> {
    let spec = JmfSpec {
        kind: parse_kind(kind)?,
        n: degree,
        params: params.inner,
    };
    eval_jmf(&spec, x).map_err(to_py)
}

/// Closed-form Erdélyi–Kober derivative of a basis function (order
/// params.mu; left-sided for the first kind, right-sided for the second).
#[pyfunction]
fn ek_deriv_jmf(kind: &str, degree: usize, params: &MuntzParams, x: f64) -> PyResult<f64> {
    let spec = JmfSpec {
        kind: parse_kind(kind)?,
        n: degree,
        params: params.inner,
    };
    ek_deriv_jmf_closed(&spec, x).map_err(to_py)
}

/// 2-norm condition number of a dense matrix.
#[pyfunction]
fn cond_2norm(rows: Vec<Vec<f64>>) -> PyResult<f64> {
    condition_number(&rows_to_matrix(rows)?).map_err(to_py)
}

/// 1-norm condition number of a dense matrix (the growth-table metric).
#[pyfunction]
fn cond_1norm(rows: Vec<Vec<f64>>) -> PyResult<f64> {
    condition_number_1norm(&rows_to_matrix(rows)?).map_err(to_py)
}

/// n-fold product of a square matrix with itself.
#[pyfunction]
fn matrix_power(rows: Vec<Vec<f64>>, n: usize) -> PyResult<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(PyValueError::new_err("matrix power needs n >= 1"));
    }
    Ok(matrix_to_rows(&dm_power(&rows_to_matrix(rows)?, n)))
}

/// Cauchy–Euler benchmark: returns (nodes, solution, e_inf).
#[pyfunction]
fn solve_cauchy_euler(n: usize) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let report = experiments::run_cauchy_euler(n, true).map_err(to_py)?;
    let nodes = report.solution.nodeset().nodes().to_vec();
    let e = report.e_infty.unwrap_or(f64::NAN);
    Ok((nodes, report.solution.values().to_vec(), e))
}

/// Riccati benchmark: returns (nodes, solution, e_inf, newton_iterations).
#[pyfunction]
fn solve_riccati(n: usize) -> PyResult<(Vec<f64>, Vec<f64>, f64, usize)> {
    let report = experiments::run_riccati(n).map_err(to_py)?;
    let nodes = report.solution.nodeset().nodes().to_vec();
    let e = report.e_infty.unwrap_or(f64::NAN);
    Ok((nodes, report.solution.values().to_vec(), e, report.iterations))
}

/// Fractional PDE benchmark at resolution n: returns the max nodal error
/// over the sampled times.
#[pyfunction]
#[pyo3(signature = (n, samples=25))]
fn solve_pde_benchmark(n: usize, samples: usize) -> PyResult<f64> {
    let report = experiments::run_pde_benchmark(n, samples).map_err(to_py)?;
    Ok(report.e_infty.unwrap_or(f64::NAN))
}

/// Viscous Burgers benchmark: returns (nodes, final solution, e_inf).
#[pyfunction]
#[pyo3(signature = (sigma, n=20, dt=1e-3))]
fn solve_burgers_benchmark(sigma: f64, n: usize, dt: f64) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let report = experiments::run_burgers_benchmark(sigma, n, dt).map_err(to_py)?;
    let nodes = report.solution.nodeset().nodes().to_vec();
    let e = report.e_infty.unwrap_or(f64::NAN);
    Ok((nodes, report.solution.values().to_vec(), e))
}

#[pymodule]
fn muntz_spectral_py(m: &Bound<PyModule>) -> PyResult<()> {
    m.add_class::<MuntzParams>()?;
    m.add_class::<NodeSet>()?;
    m.add_function(wrap_pyfunction!(quad_rule, m)?)?;
    m.add_function(wrap_pyfunction!(jmf, m)?)?;
    m.add_function(wrap_pyfunction!(ek_deriv_jmf, m)?)?;
    m.add_function(wrap_pyfunction!(cond_2norm, m)?)?;
    m.add_function(wrap_pyfunction!(cond_1norm, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_power, m)?)?;
    m.add_function(wrap_pyfunction!(solve_cauchy_euler, m)?)?;
    m.add_function(wrap_pyfunction!(solve_riccati, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pde_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(solve_burgers_benchmark, m)?)?;
    Ok(())
}
