//! Curvature checks on the constructed metric: the Einstein condition with
//! a strictly negative constant, half-flatness of the Weyl tensor, sign
//! opposition between the scalar curvature and the conformal factor, and
//! second-order convergence of the finite-difference stencils.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CaseReport, SuiteReport};
use crate::boundary::BoundaryData;
use crate::curvature::{curvature_at, curvature_at_plain, CurvatureReport};
use crate::field::field_sample;
use crate::metric::EnvelopeMetric;

pub fn suite(b: &BoundaryData, seed: u64) -> SuiteReport {
    let mut cases = Vec::new();
    let ah = b.alpha_hat_f64();
    let metric = EnvelopeMetric {
        boundary: b,
        tol: f64::INFINITY,
    };
    let h = 2e-3;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..10)
        .map(|_| {
            (
                ah + rng.random_range(0.12..2.0),
                rng.random_range(0.15..1.4),
            )
        })
        .collect();

    let reports: Vec<Result<CurvatureReport, String>> = pts
        .par_iter()
        .map(|&(x, y)| curvature_at(&metric, x, y, h).map_err(|e| e.to_string()))
        .collect();

    let mut good: Vec<&CurvatureReport> = Vec::new();
    let mut errors = Vec::new();
    for r in &reports {
        match r {
            Ok(rep) => good.push(rep),
            Err(e) => errors.push(e.clone()),
        }
    }
    if !errors.is_empty() {
        cases.push(CaseReport::exact(
            "curvature-evaluation",
            format!("{} seeded points", pts.len()),
            false,
            &errors.join("; "),
        ));
        return SuiteReport::new("einstein", cases);
    }

    let inputs = format!("10 seeded points, x in ah+(0.12, 2), y in (0.15, 1.4), h = {h}");

    // Einstein residual below 1e-3 everywhere.
    let worst_res = good
        .iter()
        .map(|r| r.einstein_residual)
        .fold(0.0f64, f64::max);
    cases.push(CaseReport::le(
        "einstein-residual",
        inputs.clone(),
        worst_res,
        1e-3,
    ));

    // The Einstein constant: strictly negative and mutually consistent to
    // within 10x the residual scale.
    {
        let lams: Vec<f64> = good.iter().map(|r| r.lambda).collect();
        let mean = lams.iter().sum::<f64>() / lams.len() as f64;
        let spread = lams.iter().fold(0.0f64, |a, &l| a.max((l - mean).abs()));
        let allowed = 10.0 * worst_res * mean.abs();
        cases.push(CaseReport::le(
            "einstein-constant-consistent",
            format!("lambda mean {mean:.6}, {inputs}"),
            spread,
            allowed,
        ));
        let max_lambda = lams.iter().fold(f64::NEG_INFINITY, |a, &l| a.max(l));
        cases.push(CaseReport::le(
            "einstein-constant-negative",
            inputs.clone(),
            max_lambda,
            -1e-6,
        ));
    }

    // Half-flat Weyl tensor: at every point exactly one of the two halves
    // is below threshold, and it is the same half throughout.
    {
        let thr = 1e-3;
        let mut consistent = true;
        let mut which: Option<bool> = None; // true: self-dual half vanishes
        let mut detail = String::new();
        for r in &good {
            let (small, large, sd_is_small) = if r.weyl_sd_norm <= r.weyl_asd_norm {
                (r.weyl_sd_norm, r.weyl_asd_norm, true)
            } else {
                (r.weyl_asd_norm, r.weyl_sd_norm, false)
            };
            // The flat half must vanish to tolerance and the other half must
            // be genuinely distinct: above tolerance outright, or three
            // orders of magnitude above the flat half at points where the
            // curvature is locally weak and both norms sit low.
            if !(small < thr && (large >= thr || large >= 1e3 * small)) {
                consistent = false;
                detail = format!(
                    "at ({:.3}, {:.3}): |W+| = {:.3e}, |W-| = {:.3e}",
                    r.x, r.y, r.weyl_sd_norm, r.weyl_asd_norm
                );
                break;
            }
            match which {
                None => which = Some(sd_is_small),
                Some(w) if w != sd_is_small => {
                    consistent = false;
                    detail = "vanishing half flips between points".to_string();
                }
                _ => {}
            }
        }
        if consistent {
            let side = if which == Some(true) {
                "self-dual half vanishes"
            } else {
                "anti-self-dual half vanishes"
            };
            let worst_small = good
                .iter()
                .map(|r| r.weyl_sd_norm.min(r.weyl_asd_norm))
                .fold(0.0f64, f64::max);
            let smallest_large = good
                .iter()
                .map(|r| r.weyl_sd_norm.max(r.weyl_asd_norm))
                .fold(f64::INFINITY, f64::min);
            detail = format!(
                "{side}; max small-half {worst_small:.3e}, min large-half {smallest_large:.3e}"
            );
        }
        cases.push(CaseReport::exact(
            "weyl-half-flat",
            inputs.clone(),
            consistent,
            &detail,
        ));
        // The cross block of the projected Weyl operator is an algebraic
        // zero; keep it near machine scale as a frame diagnostic.
        let worst_cross = good
            .iter()
            .map(|r| r.weyl_cross_norm)
            .fold(0.0f64, f64::max);
        cases.push(CaseReport::le(
            "weyl-cross-block",
            inputs.clone(),
            worst_cross,
            1e-8,
        ));
    }

    // Scalar curvature opposes the (positive) conformal factor sign.
    {
        let mut tally_ok = true;
        let mut detail = String::new();
        for (r, &(x, y)) in good.iter().zip(&pts) {
            match field_sample(b, x, y, f64::INFINITY) {
                Ok(s) => {
                    if !(s.w_alg > 0.0 && r.scalar < 0.0) {
                        tally_ok = false;
                        detail = format!(
                            "at ({x:.3}, {y:.3}): w = {:.3e}, scalar = {:.3e}",
                            s.w_alg, r.scalar
                        );
                        break;
                    }
                }
                Err(e) => {
                    tally_ok = false;
                    detail = e.to_string();
                    break;
                }
            }
        }
        if tally_ok {
            detail = "sign(scalar) = -sign(w) at all points".to_string();
        }
        cases.push(CaseReport::exact(
            "scalar-sign-opposition",
            inputs.clone(),
            tally_ok,
            &detail,
        ));
    }

    // Second-order stencil convergence: the raw (non-extrapolated) residual
    // shrinks by >= 2.5x per halving of h, at three of the points.
    {
        let h0 = 8e-3;
        let conv: Vec<Result<(f64, f64, f64), String>> = pts[..3]
            .par_iter()
            .map(|&(x, y)| {
                let r0 = curvature_at_plain(&metric, x, y, h0).map_err(|e| e.to_string())?;
                let r1 = curvature_at_plain(&metric, x, y, h0 / 2.0).map_err(|e| e.to_string())?;
                let r2 = curvature_at_plain(&metric, x, y, h0 / 4.0).map_err(|e| e.to_string())?;
                Ok((
                    r0.einstein_residual,
                    r1.einstein_residual,
                    r2.einstein_residual,
                ))
            })
            .collect();
        let mut min_ratio = f64::INFINITY;
        let mut err = None;
        for c in conv {
            match c {
                Ok((a, b2, c2)) => {
                    min_ratio = min_ratio.min(a / b2).min(b2 / c2);
                }
                Err(e) => err = Some(e),
            }
        }
        match err {
            Some(e) => cases.push(CaseReport::exact(
                "stencil-order",
                "3 points, h = 8e-3, 4e-3, 2e-3".into(),
                false,
                &e,
            )),
            None => cases.push(CaseReport::ge(
                "stencil-order",
                "raw residual ratios under h -> h/2, 3 points".into(),
                min_ratio,
                2.5,
            )),
        }
    }

    SuiteReport::new("einstein", cases)
}
