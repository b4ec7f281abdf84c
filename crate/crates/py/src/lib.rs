//! Python bindings for the cfmetric laboratory.
//!
//! The module exposes the two central objects — the exact convergent table
//! and the boundary envelope built on it — plus the field, metric, and
//! curvature evaluators and the verification runner. Exact integers and
//! rationals cross the boundary as decimal strings so nothing is rounded.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cfmetric::boundary::BoundaryData;
use cfmetric::convergents::ConvergentTable;
use cfmetric::curvature::curvature_at;
use cfmetric::digits::{self, DigitSequence};
use cfmetric::error::Error;
use cfmetric::field::{field_sample, field_sample_with_w, FieldSample};
use cfmetric::metric::{metric_at, EnvelopeMetric};
use cfmetric::topology;
use cfmetric::verify;

fn to_py(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sequence(digits: Vec<u32>, periodic: bool) -> PyResult<DigitSequence> {
    if periodic {
        DigitSequence::periodic(digits).map_err(to_py)
    } else {
        DigitSequence::inline(digits).map_err(to_py)
    }
}

/// Minus-continued-fraction digits of p/q with 0 < p < q.
#[pyfunction]
fn digits_of_rational(p: u64, q: u64) -> PyResult<Vec<u32>> {
    digits::digits_of_rational(p, q).map_err(to_py)
}

/// Exact convergent table of a digit sequence truncated at `depth`.
///
/// Accepts any digits >= 2; geometry (see `Boundary`) additionally requires
/// every digit >= 3.
#[pyclass(frozen)]
struct Table {
    inner: ConvergentTable,
}

#[pymethods]
impl Table {
    #[new]
    #[pyo3(signature = (digits, depth, periodic = false))]
    fn new(digits: Vec<u32>, depth: usize, periodic: bool) -> PyResult<Self> {
        let seq = sequence(digits, periodic)?;
        Ok(Table {
            inner: ConvergentTable::build(&seq, depth).map_err(to_py)?,
        })
    }

    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn digits(&self) -> Vec<u32> {
        self.inner.digits().to_vec()
    }

    fn is_metric_admissible(&self) -> bool {
        self.inner.is_metric_admissible()
    }

    /// Exact label pair (m_j, n_j) as decimal strings.
    fn pair(&self, j: usize) -> PyResult<(String, String)> {
        if j > self.inner.depth() + 1 {
            return Err(PyValueError::new_err(format!(
                "pair index {j} out of range 0..={}",
                self.inner.depth() + 1
            )));
        }
        let (m, n) = self.inner.pair(j);
        Ok((m.to_string(), n.to_string()))
    }

    /// Exact corner a_j as a rational string "p/q".
    fn corner(&self, j: usize) -> PyResult<String> {
        if j > self.inner.depth() {
            return Err(PyValueError::new_err(format!(
                "corner index {j} out of range 0..={}",
                self.inner.depth()
            )));
        }
        Ok(self.inner.corner(j).to_string())
    }

    /// Exact weight b_j as a rational string "p/q".
    fn weight(&self, j: usize) -> PyResult<String> {
        if j > self.inner.depth() {
            return Err(PyValueError::new_err(format!(
                "weight index {j} out of range 0..={}",
                self.inner.depth()
            )));
        }
        Ok(self.inner.weight(j).to_string())
    }

    /// Exact two-sided enclosure of the limit point as rational strings.
    fn alpha_enclosure(&self) -> (String, String) {
        (
            self.inner.alpha_lo().to_string(),
            self.inner.alpha_hi().to_string(),
        )
    }

    /// Midpoint of the enclosure, rounded to f64.
    fn alpha(&self) -> f64 {
        self.inner.alpha_f64()
    }

    /// Full table as a JSON string (exact values as strings).
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    /// Leading k x k intersection matrix in the positive-definite
    /// convention (diagonal e_j, adjacent entries -1).
    fn intersection_matrix(&self, k: usize) -> PyResult<Vec<Vec<i64>>> {
        topology::intersection_matrix(&self.inner, k).map_err(to_py)
    }

    /// Polygon descriptor (corners, edges, intersection data) as JSON.
    fn polygon_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&topology::polygon_descriptor(&self.inner))
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

/// One field evaluation: the eigenfunction, its gradient, the conformal
/// factor (algebraic route always, quadrature route on request), the
/// truncation budgets, and the level actually used.
#[pyclass(frozen, get_all)]
struct FieldPoint {
    f: f64,
    f_x: f64,
    f_y: f64,
    w_alg: f64,
    w_int: Option<f64>,
    trunc_bound: f64,
    grad_trunc: f64,
    j_used: usize,
}

impl From<FieldSample> for FieldPoint {
    fn from(s: FieldSample) -> Self {
        FieldPoint {
            f: s.f,
            f_x: s.f_x,
            f_y: s.f_y,
            w_alg: s.w_alg,
            w_int: s.w_int,
            trunc_bound: s.trunc_bound,
            grad_trunc: s.grad_trunc,
            j_used: s.j_used,
        }
    }
}

/// Curvature diagnostics at one point, from finite differences of the
/// metric at step h.
#[pyclass(frozen, get_all)]
struct Curvature {
    x: f64,
    y: f64,
    h: f64,
    einstein_constant: f64,
    scalar: f64,
    einstein_residual: f64,
    weyl_sd_norm: f64,
    weyl_asd_norm: f64,
    weyl_cross_norm: f64,
}

/// Boundary envelope and everything built on it: the eigenfunction, the
/// metric on the free torus region, and curvature diagnostics.
///
/// Requires a metric-admissible sequence (every digit >= 3).
#[pyclass(frozen)]
struct Boundary {
    inner: BoundaryData,
}

#[pymethods]
impl Boundary {
    #[new]
    #[pyo3(signature = (digits, depth, periodic = false))]
    fn new(digits: Vec<u32>, depth: usize, periodic: bool) -> PyResult<Self> {
        let seq = sequence(digits, periodic)?;
        if !seq.is_metric_admissible() {
            return Err(PyValueError::new_err(
                "digit sequence is not metric admissible (every digit must be >= 3)",
            ));
        }
        Ok(Boundary {
            inner: BoundaryData::new(ConvergentTable::build(&seq, depth).map_err(to_py)?),
        })
    }

    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// Limit point estimate (enclosure midpoint) as f64.
    fn alpha_hat(&self) -> f64 {
        self.inner.alpha_hat_f64()
    }

    /// Limit point estimate as an exact rational string.
    fn alpha_hat_exact(&self) -> String {
        self.inner.alpha_hat().to_string()
    }

    /// Convex boundary envelope eta(x); fails inside the unresolved gap.
    fn envelope(&self, x: f64) -> PyResult<f64> {
        self.inner.envelope_eval(x).map_err(to_py)
    }

    /// Boundary trace u(x): the envelope continued to all of R by odd
    /// reflection through the limit point, with a chord across the
    /// unresolved window.
    fn u(&self, x: f64) -> PyResult<f64> {
        self.inner.boundary_u(x).map_err(to_py)
    }

    /// Piecewise-linear segments as (lo, hi, slope, intercept) tuples, with
    /// u(x) = slope * x - intercept on each.
    fn segments(&self) -> Vec<(f64, f64, f64, f64)> {
        self.inner
            .segments()
            .iter()
            .map(|s| (s.lo, s.hi, s.mu, s.nu))
            .collect()
    }

    /// The unresolved interval around the limit point at this depth.
    fn gap_interval(&self) -> (f64, f64) {
        self.inner.gap_interval()
    }

    /// Field evaluation at (x, y), y > 0; algebraic conformal factor only.
    #[pyo3(signature = (x, y, tol = None))]
    fn field(&self, x: f64, y: f64, tol: Option<f64>) -> PyResult<FieldPoint> {
        let tol = tol.unwrap_or(f64::INFINITY);
        field_sample(&self.inner, x, y, tol)
            .map(FieldPoint::from)
            .map_err(to_py)
    }

    /// Field evaluation with the quadrature route to the conformal factor
    /// as well (requires y >= 1e-3; the two routes should agree to ~1e-6).
    #[pyo3(signature = (x, y, tol = None))]
    fn field_with_quadrature(&self, x: f64, y: f64, tol: Option<f64>) -> PyResult<FieldPoint> {
        let tol = tol.unwrap_or(f64::INFINITY);
        field_sample_with_w(&self.inner, x, y, tol)
            .map(FieldPoint::from)
            .map_err(to_py)
    }

    /// Metric tensor at (x, y) as a 4x4 nested list in the frame
    /// (dx, dy, torus angle 1, torus angle 2).
    #[pyo3(signature = (x, y, tol = None))]
    fn metric(&self, x: f64, y: f64, tol: Option<f64>) -> PyResult<Vec<Vec<f64>>> {
        let tol = tol.unwrap_or(f64::INFINITY);
        let s = metric_at(&self.inner, x, y, tol).map_err(to_py)?;
        Ok(s.g.iter().map(|row| row.to_vec()).collect())
    }

    /// Curvature diagnostics at (x, y) from finite differences at step h.
    #[pyo3(signature = (x, y, h = 2e-3))]
    fn curvature(&self, x: f64, y: f64, h: f64) -> PyResult<Curvature> {
        let metric = EnvelopeMetric {
            boundary: &self.inner,
            tol: f64::INFINITY,
        };
        let r = curvature_at(&metric, x, y, h).map_err(to_py)?;
        Ok(Curvature {
            x: r.x,
            y: r.y,
            h: r.h,
            einstein_constant: r.lambda,
            scalar: r.scalar,
            einstein_residual: r.einstein_residual,
            weyl_sd_norm: r.weyl_sd_norm,
            weyl_asd_norm: r.weyl_asd_norm,
            weyl_cross_norm: r.weyl_cross_norm,
        })
    }
}

/// Run every verification suite and return the reports as a JSON string.
///
/// The limit-referencing bounds use a table 20 levels deeper than `depth`,
/// so an inline sequence must carry at least depth + 20 digits; periodic
/// sequences always work. `seed` drives the random sample points.
#[pyfunction]
#[pyo3(signature = (digits, depth, periodic = false, seed = 7))]
fn verify_json(digits: Vec<u32>, depth: usize, periodic: bool, seed: u64) -> PyResult<String> {
    let seq = sequence(digits, periodic)?;
    if !seq.is_metric_admissible() {
        return Err(PyValueError::new_err(
            "digit sequence is not metric admissible (every digit must be >= 3)",
        ));
    }
    let suites = verify::run_all(&seq, depth, seed).map_err(to_py)?;
    serde_json::to_string_pretty(&suites).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn cfmetric_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Table>()?;
    m.add_class::<Boundary>()?;
    m.add_class::<FieldPoint>()?;
    m.add_class::<Curvature>()?;
    m.add_function(wrap_pyfunction!(digits_of_rational, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    Ok(())
}
