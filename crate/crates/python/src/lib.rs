//! Python bindings: `import cdara_py`.

use std::path::PathBuf;

use cdara::ara::{double_ara, numeric_double_ara_expr, QuadratureConfig};
use cdara::eval::{self, Example, Grid, SurfaceSource};
use cdara::{Axis, Complex, Error};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn axis(name: &str) -> PyResult<Axis> {
    match name {
        "X" | "x" => Ok(Axis::X),
        "T" | "t" => Ok(Axis::T),
        _ => Err(PyValueError::new_err(format!(
            "axis must be 'X' or 'T', got {name:?}"
        ))),
    }
}

fn params(p: f64, q: f64) -> PyResult<cdara::FracParams> {
    cdara::FracParams::new(p, q).map_err(to_py)
}

fn example(i: u32) -> PyResult<Example> {
    Example::from_index(i).map_err(to_py)
}

/// Finite sum of `c·X^n·T^m·e^{μX+νT}` in stretched coordinates.
#[pyclass(name = "Expression", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyExpression(cdara::Expression);

#[pymethods]
impl PyExpression {
    #[new]
    fn zero() -> Self {
        Self(cdara::Expression::zero())
    }

    /// Build from `(coeff, n, m, mu, nu)` tuples with complex coeff/exponents.
    #[staticmethod]
    fn from_terms(terms: Vec<(Complex, u32, u32, Complex, Complex)>) -> PyResult<Self> {
        let terms = terms
            .into_iter()
            .map(|(c, n, m, mu, nu)| cdara::MonomialTerm::new(c, n, m, mu, nu))
            .collect();
        cdara::Expression::canonicalize(terms)
            .map(Self)
            .map_err(to_py)
    }

    #[staticmethod]
    fn constant(c: f64) -> Self {
        Self(cdara::Expression::constant(c))
    }

    #[staticmethod]
    fn xpow(n: u32) -> Self {
        Self(cdara::Expression::xpow_n(n))
    }

    #[staticmethod]
    fn tpow(m: u32) -> Self {
        Self(cdara::Expression::tpow_m(m))
    }

    #[staticmethod]
    fn exp_xt(lam: f64, beta: f64) -> Self {
        Self(cdara::Expression::exp_xt(lam, beta))
    }

    #[staticmethod]
    fn sin_x(lam: f64) -> Self {
        Self(cdara::Expression::sin_x(lam))
    }

    #[staticmethod]
    fn cos_x(lam: f64) -> Self {
        Self(cdara::Expression::cos_x(lam))
    }

    #[staticmethod]
    fn sin_t(beta: f64) -> Self {
        Self(cdara::Expression::sin_t(beta))
    }

    #[staticmethod]
    fn cos_t(beta: f64) -> Self {
        Self(cdara::Expression::cos_t(beta))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(Self)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn terms(&self) -> Vec<(Complex, u32, u32, Complex, Complex)> {
        self.0
            .terms()
            .iter()
            .map(|t| (t.coeff, t.xpow, t.tpow, t.xexp, t.texp))
            .collect()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(self.0.sub(&other.0))
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(self.0.multiply(&other.0))
    }

    fn __neg__(&self) -> Self {
        Self(self.0.scale(-1.0))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn scale(&self, c: Complex) -> Self {
        Self(self.0.scale(c))
    }

    fn differentiate(&self, axis_name: &str) -> PyResult<Self> {
        Ok(Self(self.0.differentiate(axis(axis_name)?)))
    }

    fn integrate_t(&self) -> Self {
        Self(self.0.integrate_t())
    }

    fn divide_by_x(&self) -> PyResult<Self> {
        self.0.divide_by_x().map(Self).map_err(to_py)
    }

    fn truncate_t_degree(&self, degree: u32) -> Self {
        Self(self.0.truncate_t_degree(degree))
    }

    /// Real value at stretched coordinates `(X, T)`.
    fn evaluate(&self, x: f64, t: f64) -> PyResult<f64> {
        self.0.evaluate(x, t).map_err(to_py)
    }

    fn eval_complex(&self, x: f64, t: f64) -> Complex {
        self.0.eval_complex(x, t)
    }

    fn is_real(&self) -> bool {
        self.0.is_real()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        self.0.approx_eq(&other.0, rel_tol)
    }

    /// Exact double transform evaluated at `(r, s)`.
    fn double_ara(&self, r: Complex, s: Complex) -> Complex {
        double_ara(&self.0).eval(r, s)
    }

    /// Symbolic image as text.
    fn image(&self) -> String {
        double_ara(&self.0).to_string()
    }

    /// Gauss–Laguerre value of the defining integral at `(r, s)`.
    #[pyo3(signature = (r, s, p=1.0, q=1.0, node_count=64))]
    fn numeric_double_ara(
        &self,
        r: Complex,
        s: Complex,
        p: f64,
        q: f64,
        node_count: usize,
    ) -> PyResult<Complex> {
        let cfg = QuadratureConfig::new(node_count, 0.5).map_err(to_py)?;
        numeric_double_ara_expr(&self.0, r, s, params(p, q)?, cfg).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expression({})", self.0)
    }
}

#[pyclass(name = "ProblemSpec", frozen, from_py_object)]
#[derive(Clone)]
struct PyProblemSpec(cdara::ProblemSpec);

#[pymethods]
impl PyProblemSpec {
    #[staticmethod]
    fn example1() -> Self {
        Self(cdara::ProblemSpec::example1())
    }

    #[staticmethod]
    fn example2() -> Self {
        Self(cdara::ProblemSpec::example2())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        cdara::ProblemSpec::from_json(text).map(Self).map_err(to_py)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(to_py)
    }

    #[getter]
    fn geometry(&self) -> &'static str {
        match self.0.geometry {
            cdara::Geometry::Regular => "regular",
            cdara::Geometry::SingularBessel => "singular_bessel",
        }
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.0.lambda
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }

    fn __repr__(&self) -> String {
        format!(
            "ProblemSpec(geometry={}, lambda={}, alpha={}, beta={})",
            self.geometry(),
            self.0.lambda,
            self.0.alpha,
            self.0.beta
        )
    }
}

#[pyclass(name = "SeriesSolution", frozen)]
struct PySeriesSolution(cdara::SeriesSolution);

#[pymethods]
impl PySeriesSolution {
    #[getter]
    fn u(&self) -> Vec<PyExpression> {
        self.0
            .u_components
            .iter()
            .cloned()
            .map(PyExpression)
            .collect()
    }

    #[getter]
    fn v(&self) -> Vec<PyExpression> {
        self.0
            .v_components
            .iter()
            .cloned()
            .map(PyExpression)
            .collect()
    }

    #[getter]
    fn terminated_at(&self) -> Option<usize> {
        self.0.terminated_at
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn partial_sum(&self, n: usize) -> PyResult<(PyExpression, PyExpression)> {
        let (u, v) = self.0.partial_sum(n).map_err(to_py)?;
        Ok((PyExpression(u), PyExpression(v)))
    }

    /// Largest numeric PDE residual over physical sample points.
    #[pyo3(signature = (points, p=1.0, q=1.0))]
    fn residual(&self, points: Vec<(f64, f64)>, p: f64, q: f64) -> PyResult<f64> {
        eval::residual_check(&self.0.spec, &self.0, params(p, q)?, &points).map_err(to_py)
    }
}

#[pyfunction]
#[pyo3(signature = (spec, order=cdara::solver::DEFAULT_ORDER))]
fn solve(spec: &PyProblemSpec, order: usize) -> PyResult<PySeriesSolution> {
    cdara::solve(&spec.0, order)
        .map(PySeriesSolution)
        .map_err(to_py)
}

/// Rows `(t, exact, approx, abs_error)`; defaults to the nine table times.
#[pyfunction]
#[pyo3(signature = (example_index, order=6, x=1.0, t_values=None, p=1.0, q=1.0))]
fn error_table(
    example_index: u32,
    order: usize,
    x: f64,
    t_values: Option<Vec<f64>>,
    p: f64,
    q: f64,
) -> PyResult<Vec<(f64, f64, f64, f64)>> {
    let ts = t_values.unwrap_or_else(|| eval::TABLE_T_VALUES.to_vec());
    let rows =
        eval::error_table(example(example_index)?, order, x, &ts, params(p, q)?).map_err(to_py)?;
    Ok(rows
        .iter()
        .map(|r| (r.t, r.exact, r.approx, r.abs_error))
        .collect())
}

/// Exact `(u, v)` of a built-in example at physical `(x, t)`.
#[pyfunction]
#[pyo3(signature = (example_index, x, t, p=1.0, q=1.0))]
fn exact_solution(example_index: u32, x: f64, t: f64, p: f64, q: f64) -> PyResult<(f64, f64)> {
    eval::exact_oracle(example(example_index)?, params(p, q)?)(x, t).map_err(to_py)
}

#[pyfunction]
fn to_stretched(x: f64, t: f64, p: f64, q: f64) -> PyResult<(f64, f64)> {
    params(p, q)?.to_stretched(x, t).map_err(to_py)
}

/// Write the CSV surface for a built-in example and (p, q) pairs.
#[pyfunction]
#[pyo3(signature = (example_index, pairs, path, x_range=(0.1, 3.0, 30), t_range=(0.5, 0.5, 1), order=6))]
fn write_surface(
    example_index: u32,
    pairs: Vec<(f64, f64)>,
    path: PathBuf,
    x_range: (f64, f64, usize),
    t_range: (f64, f64, usize),
    order: usize,
) -> PyResult<()> {
    let pairs = pairs
        .into_iter()
        .map(|(p, q)| params(p, q))
        .collect::<PyResult<Vec<_>>>()?;
    let grid = Grid {
        x_min: x_range.0,
        x_max: x_range.1,
        x_steps: x_range.2,
        t_min: t_range.0,
        t_max: t_range.1,
        t_steps: t_range.2,
    };
    eval::emit_surface(
        &SurfaceSource::Example(example(example_index)?),
        &pairs,
        &grid,
        order,
        &path,
    )
    .map_err(to_py)
}

/// Run the transform table check, write the report, return whether all rows pass.
#[pyfunction]
fn verify_transforms(path: PathBuf) -> PyResult<bool> {
    eval::verify_transforms(&path)
        .map(|r| r.all_passed())
        .map_err(to_py)
}

#[pymodule]
fn cdara_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpression>()?;
    m.add_class::<PyProblemSpec>()?;
    m.add_class::<PySeriesSolution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(error_table, m)?)?;
    m.add_function(wrap_pyfunction!(exact_solution, m)?)?;
    m.add_function(wrap_pyfunction!(to_stretched, m)?)?;
    m.add_function(wrap_pyfunction!(write_surface, m)?)?;
    m.add_function(wrap_pyfunction!(verify_transforms, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_names() {
        assert_eq!(axis("X").unwrap(), Axis::X);
        assert_eq!(axis("t").unwrap(), Axis::T);
        assert!(axis("z").is_err());
    }

    #[test]
    fn argument_validation() {
        assert!(params(0.5, 1.0).is_ok());
        assert!(params(0.0, 1.0).is_err());
        assert!(example(2).is_ok());
        assert!(example(5).is_err());
    }
}
