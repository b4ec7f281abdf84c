//! Assembly of the 4-metric on the free torus region from a field sample.
//!
//! Coordinates are ordered `(x, y, z1, z2)`: the half-plane pair first, then
//! the two torus angles. With `v1 = (f_y, x f_y - y f_x)` and
//! `v2 = (f_x, x f_x + y f_y - f)` the metric is
//!
//! ```text
//! g = |w|/f^2 (dx^2 + dy^2)
//!   + [ (v1[1] dz1 + v1[0] dz2)^2 + (v2[1] dz1 + v2[0] dz2)^2 ] / (|w| f^2)
//! ```
//!
//! so the torus block has entries
//! `g_z1z1 = c (v1[1]^2 + v2[1]^2)`, `g_z2z2 = c (v1[0]^2 + v2[0]^2)`,
//! `g_z1z2 = -c (v1[0] v1[1] + v2[0] v2[1])` with `c = 1/(|w| f^2)`.
//! Because `v1 x v2 = y w` identically, the determinant collapses to
//! `det g = w^2 y^2 / f^8`, which [`MetricSample::det_residual`] measures.

use crate::boundary::BoundaryData;
use crate::error::{Error, Result};
use crate::field::{self, FieldSample, SyntheticMode};
use crate::linalg::Mat4;

/// Coordinate order used for every 4x4 tensor in the workspace.
pub const COORD_NAMES: [&str; 4] = ["x", "y", "z1", "z2"];

/// The metric at one point, with its ingredients and a determinant check.
#[derive(Clone, Copy, Debug)]
pub struct MetricSample {
    pub x: f64,
    pub y: f64,
    pub g: Mat4,
    pub f: f64,
    pub w: f64,
    /// Relative defect of `det g = w^2 y^2 / f^8`.
    pub det_residual: f64,
}

/// Build the metric from an existing field sample.
pub fn metric_from_sample(s: &FieldSample) -> Result<MetricSample> {
    let FieldSample { x, y, f, v1, v2, w_alg: w, .. } = *s;
    if f == 0.0 || w == 0.0 {
        return Err(Error::DegenerateMetric {
            x,
            y,
            reason: format!("vanishing factor (f = {f}, w = {w})"),
        });
    }
    let conf = w.abs() / (f * f);
    let c = 1.0 / (w.abs() * f * f);
    let g: Mat4 = [
        [conf, 0.0, 0.0, 0.0],
        [0.0, conf, 0.0, 0.0],
        [
            0.0,
            0.0,
            c * (v1[1] * v1[1] + v2[1] * v2[1]),
            -c * (v1[0] * v1[1] + v2[0] * v2[1]),
        ],
        [
            0.0,
            0.0,
            -c * (v1[0] * v1[1] + v2[0] * v2[1]),
            c * (v1[0] * v1[0] + v2[0] * v2[0]),
        ],
    ];
    if g.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateMetric {
            x,
            y,
            reason: "non-finite metric entry".into(),
        });
    }
    let det = crate::linalg::det4(&g);
    let expect = w * w * y * y / f.powi(8);
    let det_residual = (det - expect).abs() / expect.abs().max(f64::MIN_POSITIVE);
    Ok(MetricSample { x, y, g, f, w, det_residual })
}

/// Metric of the envelope field at a point.
pub fn metric_at(b: &BoundaryData, x: f64, y: f64, tol: f64) -> Result<MetricSample> {
    metric_from_sample(&field::field_sample(b, x, y, tol)?)
}

/// Metric of a synthetic mode at a point.
pub fn synthetic_metric_at(
    mode: SyntheticMode,
    alpha_hat: f64,
    x: f64,
    y: f64,
) -> Result<MetricSample> {
    metric_from_sample(&field::synthetic_field_sample(mode, alpha_hat, x, y)?)
}

/// A map `(x, y) -> g` that the curvature stencils can sample. Implementors
/// must be toric: no dependence on the angles, which is what makes the
/// two-coordinate stencil exact.
pub trait MetricField: Sync {
    fn g(&self, x: f64, y: f64) -> Result<Mat4>;
}

/// The metric family member cut out by envelope boundary data.
pub struct EnvelopeMetric<'a> {
    pub boundary: &'a BoundaryData,
    /// Truncation budget passed through to the field evaluator.
    pub tol: f64,
}

impl MetricField for EnvelopeMetric<'_> {
    fn g(&self, x: f64, y: f64) -> Result<Mat4> {
        Ok(metric_at(self.boundary, x, y, self.tol)?.g)
    }
}

/// Metric generated by a synthetic mode (the linear mode is hyperbolic
/// 4-space in disguise).
pub struct SyntheticMetric {
    pub mode: SyntheticMode,
    pub alpha_hat: f64,
}

impl MetricField for SyntheticMetric {
    fn g(&self, x: f64, y: f64) -> Result<Mat4> {
        Ok(synthetic_metric_at(self.mode, self.alpha_hat, x, y)?.g)
    }
}
