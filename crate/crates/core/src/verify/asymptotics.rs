//! Boundary asymptotics: quadratic approach of the field to its boundary
//! datum over edges, the corner profile with its universal constant, the
//! collapsing circle directions over edges, and agreement with the flat
//! orbifold model in a corner chart.

use super::{CaseReport, SuiteReport};
use crate::boundary::BoundaryData;
use crate::field::{f_eval, field_sample};
use crate::fit::fit_power;
use crate::linalg::{self, Mat4};
use crate::metric::metric_at;
use crate::rat::rat_to_f64;

fn corner_f64(b: &BoundaryData, j: usize) -> f64 {
    rat_to_f64(b.table().corner(j))
}

fn pair_f64(b: &BoundaryData, j: usize) -> (f64, f64) {
    let (m, n) = b.table().pair(j);
    use num_traits::ToPrimitive;
    (
        m.to_f64().unwrap_or(f64::NAN),
        n.to_f64().unwrap_or(f64::NAN),
    )
}

/// Fit a power law to decay data and emit exponent + CI-coverage cases.
///
/// `allow` is an absolute consistency band around the expected exponent for
/// fits whose leading error is a known one-sided systematic (an `O(x)`
/// correction from a neighbouring kink): there the residual-based CI is
/// honest about scatter but cannot cover the bias, so the slope passes if
/// the CI covers the expectation or the point estimate lands within the
/// stated band. Pass `allow = 0.0` where the CI alone should decide.
fn exponent_cases(
    cases: &mut Vec<CaseReport>,
    name: &str,
    inputs: String,
    xs: &[f64],
    ys: &[f64],
    expected: f64,
    allow: f64,
) {
    match fit_power(xs, ys) {
        Ok(fit) => {
            cases.push(CaseReport::ge(
                &format!("{name}-exponent"),
                inputs.clone(),
                fit.slope,
                1.9,
            ));
            let consistent =
                fit.slope_covers(expected) || (fit.slope - expected).abs() <= allow;
            cases.push(CaseReport::exact(
                &format!("{name}-exponent-ci"),
                inputs,
                consistent,
                &format!(
                    "slope {:.4} +/- {:.4} (95% CI), expected {expected}, allowance {allow}",
                    fit.slope, fit.slope_ci95
                ),
            ));
        }
        Err(e) => cases.push(CaseReport::exact(name, inputs, false, &e.to_string())),
    }
}

/// Scale on which corner `j` sees only its own wedge: the distance to the
/// nearest neighbouring corner.
fn corner_gap(b: &BoundaryData, j: usize) -> f64 {
    let c = corner_f64(b, j);
    let left = corner_f64(b, j + 1);
    let right = corner_f64(b, j - 1);
    (c - left).min(right - c)
}

pub fn suite(b: &BoundaryData) -> SuiteReport {
    let mut cases = Vec::new();

    // Edge profiles: on an edge midpoint vertical, f approaches the edge's
    // linear datum quadratically in y. Vertical scales shrink with the edge
    // so the probe stays inside the asymptotic regime at any digit size.
    for j in [1usize, 2] {
        let len = corner_f64(b, j - 1) - corner_f64(b, j);
        let mid = 0.5 * (corner_f64(b, j) + corner_f64(b, j - 1));
        match b.slope_intercept(mid) {
            Ok((mu, nu)) => {
                let u_mid = mu * mid - nu;
                let ys: Vec<f64> = (0..6).map(|k| 0.3 * len / f64::powi(2.0, k)).collect();
                let errs: Vec<f64> = ys
                    .iter()
                    .map(|&y| {
                        f_eval(b, mid, y, f64::INFINITY)
                            .map(|f| (f - u_mid).abs())
                            .unwrap_or(f64::INFINITY)
                    })
                    .collect();
                exponent_cases(
                    &mut cases,
                    &format!("edge{j}-fit"),
                    format!(
                        "edge {j} midpoint x = {mid:.6}, y = {:.2e} .. {:.2e}",
                        ys[0],
                        ys[ys.len() - 1]
                    ),
                    &ys,
                    &errs,
                    2.0,
                    0.0,
                );
            }
            Err(e) => cases.push(CaseReport::exact(
                &format!("edge{j}-fit"),
                format!("midpoint of edge {j}"),
                false,
                &e.to_string(),
            )),
        }
    }

    // The conformal factor approaches a positive limit on edge interiors.
    {
        let len = corner_f64(b, 0) - corner_f64(b, 1);
        let mid = 0.5 * (corner_f64(b, 1) + corner_f64(b, 0));
        let ws: Vec<f64> = [0.04 * len, 0.02 * len, 0.01 * len]
            .iter()
            .map(|&y| {
                field_sample(b, mid, y, f64::INFINITY)
                    .map(|s| s.w_alg)
                    .unwrap_or(f64::NAN)
            })
            .collect();
        let w0 = ws[2];
        let drift = (ws[2] - ws[1]).abs() / w0.abs().max(1e-300);
        cases.push(CaseReport::ge(
            "edge-w-limit-positive",
            format!("edge 1 midpoint, shrinking y; w = {ws:?}"),
            w0,
            1e-12,
        ));
        cases.push(CaseReport::le(
            "edge-w-limit-flat",
            "relative drift between y = 0.01 and y = 0.005".into(),
            drift,
            0.05,
        ));
    }

    // Circle collapse: the torus direction K_j = m_j dz1-dual + n_j dz2-dual
    // degenerates quadratically over the interior of edge j.
    for j in [1usize, 2] {
        let len = corner_f64(b, j - 1) - corner_f64(b, j);
        let mid = 0.5 * (corner_f64(b, j) + corner_f64(b, j - 1));
        let (m, n) = pair_f64(b, j);
        let ys: Vec<f64> = (0..5).map(|k| 0.3 * len / f64::powi(2.0, k)).collect();
        let qs: Vec<f64> = ys
            .iter()
            .map(|&y| {
                metric_at(b, mid, y, f64::INFINITY)
                    .map(|ms| {
                        m * m * ms.g[2][2] + 2.0 * m * n * ms.g[2][3] + n * n * ms.g[3][3]
                    })
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        exponent_cases(
            &mut cases,
            &format!("edge{j}-circle-collapse"),
            format!("g(K_{j}, K_{j}) on edge {j} midpoint vertical"),
            &ys,
            &qs,
            2.0,
            0.05,
        );
    }

    // Corner profile: above corner a_j the field is its boundary value plus
    // a linear cone term (m_j - m_{j+1}) y / 2 with a quadratic remainder.
    for j in [1usize, 2] {
        let c = corner_f64(b, j);
        let gap = corner_gap(b, j);
        let (m_r, _) = pair_f64(b, j);
        let (m_l, _) = pair_f64(b, j + 1);
        let u_c = rat_to_f64(b.table().weight(j)); // eta(a_j) = b_j exactly
        let cone = 0.5 * (m_r - m_l);
        // Start at 0.1 gap: crowded corners (deep kink clusters just past the
        // neighbour) push large y^2/(rho + d) cross terms into the window
        // until y is well below the neighbour distance.
        let ys: Vec<f64> = (0..7).map(|k| 0.1 * gap / f64::powi(2.0, k)).collect();
        let rems: Vec<f64> = ys
            .iter()
            .map(|&y| {
                f_eval(b, c, y, f64::INFINITY)
                    .map(|f| (f - u_c - cone * y).abs())
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        exponent_cases(
            &mut cases,
            &format!("corner{j}-profile"),
            format!("vertical ray above a_{j} = {c:.6}, cone slope {cone:.3}"),
            &ys,
            &rems,
            2.0,
            0.0,
        );
    }

    // The same profile along a 45-degree ray into corner a_1.
    {
        let j = 1usize;
        let c = corner_f64(b, j);
        let gap = corner_gap(b, j);
        let (m_r, _) = pair_f64(b, j);
        let (m_l, _) = pair_f64(b, j + 1);
        let u_c = rat_to_f64(b.table().weight(j));
        let avg = 0.5 * (m_r + m_l);
        let cone = 0.5 * (m_r - m_l);
        // The remainder is a sum of y^2 / (rho_k + |x - c_k|) terms over the
        // other kinks, so its local slope only reaches 2 once t is well below
        // the neighbour distance; start the dyadic ladder at 0.075 gap.
        let ts: Vec<f64> = (0..7).map(|k| 0.075 * gap / f64::powi(2.0, k)).collect();
        let rems: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let (dx, y) = (t / 2f64.sqrt(), t / 2f64.sqrt());
                f_eval(b, c + dx, y, f64::INFINITY)
                    .map(|f| (f - (u_c + avg * dx) - cone * t).abs())
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        exponent_cases(
            &mut cases,
            "corner1-profile-diagonal",
            "45-degree ray into a_1".into(),
            &ts,
            &rems,
            2.0,
            0.05,
        );
    }

    // The corner constant: w * r tends to 1/2 at every corner (measured on
    // the vertical ray; r = y there). This picks the smaller branch of the
    // half-versus-one question.
    {
        let c = corner_f64(b, 1);
        let gap = corner_gap(b, 1);
        let kappas: Vec<f64> = (0..5)
            .map(|k| {
                let y = 0.1 * gap / f64::powi(2.0, k);
                field_sample(b, c, y, f64::INFINITY)
                    .map(|s| s.w_alg * y)
                    .unwrap_or(f64::NAN)
            })
            .collect();
        // w * y approaches its limit linearly in y, so the raw readings at
        // halved heights still drift by O(y); the Richardson combination
        // 2 k(y/2) - k(y) cancels the linear term and must sit flat.
        let extrap: Vec<f64> = (1..kappas.len())
            .map(|k| 2.0 * kappas[k] - kappas[k - 1])
            .collect();
        let kappa = extrap[extrap.len() - 1];
        let mut max_step = 0.0f64;
        for k in 1..extrap.len() {
            max_step = max_step.max((extrap[k] - extrap[k - 1]).abs() / kappa.abs());
        }
        cases.push(CaseReport {
            name: "corner-constant".to_string(),
            inputs: format!(
                "w * y above a_1, 5 halvings from y = {:.2e}; raw {kappas:?}, extrapolated {extrap:?}",
                0.1 * gap
            ),
            measured: format!("kappa = {kappa:.6}"),
            bound: "in (0.4, 0.6), settling".to_string(),
            margin: (kappa - 0.4).min(0.6 - kappa),
            pass: kappa > 0.4 && kappa < 0.6 && max_step < 0.05,
        });
    }

    // Corner chart: after the square-root substitution the metric at chart
    // distance r matches the flat orbifold model to max-entry accuracy 1e-2.
    {
        let j = 0usize;
        let c = corner_f64(b, j);
        let bj = rat_to_f64(b.table().weight(j));
        let (m_r, n_r) = pair_f64(b, j);
        let (m_l, n_l) = pair_f64(b, j + 1);
        let theta_r = [-n_r, m_r];
        let theta_l = [-n_l, m_l];
        let pref = 2.0 / (bj * bj);
        // The ring radius lives in the chart: |(r1, r2)| = 1e-2, which puts
        // the base point at distance r^2 = 1e-4 from the corner, where the
        // metric's O(distance) drift sits comfortably under the 1e-2 gate.
        let r = 1e-2f64;
        let mut worst = 0.0f64;
        let mut failed = None;
        for t in [0.35f64, 0.65, 0.95, 1.22] {
            let (r1, r2) = (r * t.sin(), r * t.cos());
            let (x, y) = (c + r2 * r2 - r1 * r1, 2.0 * r1 * r2);
            match metric_at(b, x, y, f64::INFINITY) {
                Ok(ms) => {
                    let mut ghat: Mat4 = [[0.0; 4]; 4];
                    let conf = ms.g[0][0];
                    ghat[0][0] = conf * 4.0 * (r1 * r1 + r2 * r2);
                    ghat[1][1] = ghat[0][0];
                    for a in 0..2 {
                        for bb in 0..2 {
                            ghat[2 + a][2 + bb] = ms.g[2 + a][2 + bb];
                        }
                    }
                    let mut model: Mat4 = [[0.0; 4]; 4];
                    model[0][0] = pref;
                    model[1][1] = pref;
                    for a in 0..2 {
                        for bb in 0..2 {
                            model[2 + a][2 + bb] = pref
                                * (r1 * r1 * theta_l[a] * theta_l[bb]
                                    + r2 * r2 * theta_r[a] * theta_r[bb]);
                        }
                    }
                    let dev = match flat_model_deviation(&model, &ghat) {
                        Some(d) => d,
                        None => {
                            failed = Some(format!("model not positive definite at t = {t}"));
                            break;
                        }
                    };
                    worst = worst.max(dev);
                }
                Err(e) => {
                    failed = Some(e.to_string());
                    break;
                }
            }
        }
        match failed {
            Some(e) => cases.push(CaseReport::exact(
                "corner-flat-model",
                "chart ring |(r1, r2)| = 1e-2 at a_0".into(),
                false,
                &e,
            )),
            None => cases.push(CaseReport::le(
                "corner-flat-model",
                "4 chart angles, |(r1, r2)| = 1e-2 (base distance 1e-4) at a_0".into(),
                worst,
                1e-2,
            )),
        }
    }

    SuiteReport::new("asymptotics", cases)
}

/// `max |L^{-1} G L^{-T} - I|` with `L` the Cholesky factor of the model.
fn flat_model_deviation(model: &Mat4, ghat: &Mat4) -> Option<f64> {
    let l = linalg::cholesky4(model)?;
    let linv = linalg::inv_lower4(&l);
    let mut sand: Mat4 = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = 0.0;
            for a in 0..4 {
                for bb in 0..4 {
                    acc += linv[i][a] * ghat[a][bb] * linv[j][bb];
                }
            }
            sand[i][j] = acc;
        }
    }
    let mut dev = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((sand[i][j] - target).abs());
        }
    }
    Some(dev)
}
