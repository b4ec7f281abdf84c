//! Completeness-side checks near the unresolved vertex: scale-invariant
//! combinations of `f` and `w` on a log grid shrinking into the vertex, and
//! length probes showing which boundary pieces sit at infinite distance
//! (the reflection axis and the vertex) and which stay finite (edges).

use rayon::prelude::*;

use super::{CaseReport, SuiteReport};
use crate::boundary::BoundaryData;
use crate::field::field_sample;
use crate::fit::fit_line;
use crate::quad::composite_simpson;
use crate::rat::rat_to_f64;

/// Composite Simpson with panel doubling to relative tolerance 1e-6.
fn probe_length(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut n = 64;
    let mut prev = composite_simpson(f, a, b, n);
    loop {
        n *= 2;
        let cur = composite_simpson(f, a, b, n);
        if (cur - prev).abs() <= 1e-6 * cur.abs().max(1.0) || n >= (1 << 15) {
            return cur;
        }
        prev = cur;
    }
}

/// Length of the line element `sqrt(w)/f` along a straight probe, with a
/// log substitution in the shrinking coordinate so the quadrature sees a
/// bounded integrand: probes are parameterized by `t in [d, t1]` and
/// integrated in `sigma = ln t`.
fn log_probe(b: &BoundaryData, d: f64, t1: f64, point: &dyn Fn(f64) -> (f64, f64, f64)) -> f64 {
    let integrand = |sigma: f64| -> f64 {
        let t = sigma.exp();
        let (x, y, speed) = point(t);
        match field_sample(b, x, y, f64::INFINITY) {
            Ok(s) if s.f > 0.0 && s.w_alg > 0.0 => s.w_alg.sqrt() / s.f * speed * t,
            _ => f64::NAN,
        }
    };
    probe_length(&integrand, d.ln(), t1.ln())
}

pub fn suite(b: &BoundaryData) -> SuiteReport {
    let mut cases = Vec::new();
    let ah = b.alpha_hat_f64();

    // The truncation window must be far inside the smallest grid scale.
    let width = b.width_f64();
    cases.push(CaseReport::le(
        "vertex-window-guard",
        format!("enclosure width at J = {}", b.depth()),
        width,
        1e-6,
    ));
    if width > 1e-6 {
        return SuiteReport::new("completeness", cases);
    }

    // 30 x 30 log grid xi, upsilon in [1e-4, 1e-1].
    {
        let n = 30usize;
        let coord = |i: usize| 1e-4 * 1000f64.powf(i as f64 / (n - 1) as f64);
        let rows: Vec<Vec<(f64, f64, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = coord(i);
                (0..n)
                    .map(|k| {
                        let up = coord(k);
                        match field_sample(b, ah + xi, up, f64::INFINITY) {
                            Ok(s) => {
                                let scale = xi + up;
                                (
                                    s.f / scale.sqrt(),
                                    s.w_alg * scale,
                                    s.w_alg / (s.f * s.f) * scale * scale,
                                )
                            }
                            Err(_) => (f64::NAN, f64::NAN, f64::NAN),
                        }
                    })
                    .collect()
            })
            .collect();

        let mut q1_max = 0.0f64;
        let mut q2_min = f64::INFINITY;
        let mut q3_min = f64::INFINITY;
        let mut all_finite = true;
        for row in &rows {
            for &(q1, q2, q3) in row {
                all_finite &= q1.is_finite() && q2.is_finite() && q3.is_finite();
                q1_max = q1_max.max(q1);
                q2_min = q2_min.min(q2);
                q3_min = q3_min.min(q3);
            }
        }
        let grid = format!("30x30 log grid, xi and upsilon in [1e-4, 1e-1], ah = {ah:.6}");
        cases.push(CaseReport::exact(
            "vertex-scale-bounded",
            grid.clone(),
            all_finite && q1_max.is_finite(),
            &format!("max f/sqrt(xi+upsilon) = {q1_max:.6}"),
        ));
        cases.push(CaseReport::ge(
            "vertex-w-scale-positive",
            format!("min of w (xi+upsilon); {grid}"),
            q2_min,
            1e-12,
        ));
        cases.push(CaseReport::ge(
            "vertex-conformal-scale-positive",
            format!("min of (w/f^2)(xi+upsilon)^2; {grid}"),
            q3_min,
            1e-12,
        ));

        // Flat trend of the bounded combination along the grid diagonal.
        let xs: Vec<f64> = (0..n).map(|i| (2.0 * coord(i)).ln()).collect();
        let ys: Vec<f64> = (0..n).map(|i| rows[i][i].0.ln()).collect();
        match fit_line(&xs, &ys) {
            Ok(fit) => {
                cases.push(CaseReport::le(
                    "vertex-scale-trend",
                    format!("log-log slope of f/sqrt(2 xi) on the diagonal, r2 = {:.4}", fit.r2),
                    fit.slope.abs(),
                    0.25,
                ));
            }
            Err(e) => cases.push(CaseReport::exact(
                "vertex-scale-trend",
                "diagonal fit".into(),
                false,
                &e.to_string(),
            )),
        }
    }

    // Length probes. Divergent targets: the reflection axis (horizontal
    // probe at y = 1) and the vertex (diagonal probe); lengths must grow
    // linearly in log(1/d). Convergent target: an edge interior point.
    let ds = [1e-1, 1e-2, 1e-3, 1e-4];
    {
        let probes: Vec<(&str, Box<dyn Fn(f64) -> (f64, f64, f64) + Sync>)> = vec![
            ("axis-probe", Box::new(move |t: f64| (ah + t, 1.0, 1.0))),
            (
                "vertex-probe",
                Box::new(move |t: f64| (ah + t, t, 2f64.sqrt())),
            ),
        ];
        let results: Vec<(String, Vec<f64>)> = probes
            .par_iter()
            .map(|(name, point)| {
                let lens: Vec<f64> = ds
                    .iter()
                    .map(|&d| log_probe(b, d, 0.4, point.as_ref()))
                    .collect();
                (name.to_string(), lens)
            })
            .collect();
        for (name, lens) in results {
            let xs: Vec<f64> = ds.iter().map(|&d| (1.0 / d).ln()).collect();
            match fit_line(&xs, &lens) {
                Ok(fit) => {
                    cases.push(CaseReport::ge(
                        &format!("{name}-divergent"),
                        format!("lengths {lens:?} vs log(1/d)"),
                        fit.slope,
                        1e-3,
                    ));
                    cases.push(CaseReport::ge(
                        &format!("{name}-log-linear"),
                        format!("line fit over 4 cutoffs, slope {:.4}", fit.slope),
                        fit.r2,
                        0.99,
                    ));
                }
                Err(e) => cases.push(CaseReport::exact(
                    &name,
                    "length fit".into(),
                    false,
                    &e.to_string(),
                )),
            }
        }
    }

    // Edge probe: vertical descent onto an edge interior point has a
    // finite-length limit (the integrand extends continuously to y = 0).
    {
        let mid = 0.5 * (rat_to_f64(b.table().corner(0)) + rat_to_f64(b.table().corner(1)));
        let lens: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&d| {
                let integrand = |y: f64| -> f64 {
                    match field_sample(b, mid, y, f64::INFINITY) {
                        Ok(s) if s.f > 0.0 && s.w_alg > 0.0 => s.w_alg.sqrt() / s.f,
                        _ => f64::NAN,
                    }
                };
                probe_length(&integrand, d, 0.4)
            })
            .collect();
        let rel_tail = (lens[2] - lens[1]).abs() / lens[2].abs().max(1e-300);
        cases.push(CaseReport::le(
            "edge-probe-converges",
            format!("edge 1 midpoint x = {mid:.6}, lengths {lens:?}"),
            rel_tail,
            0.02,
        ));
    }

    SuiteReport::new("completeness", cases)
}
