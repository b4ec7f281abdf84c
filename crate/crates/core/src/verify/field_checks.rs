//! Field-level checks: the two independent routes to the conformal factor
//! `w`, positivity on the upper quadrant, odd symmetry, truncation honesty,
//! boundary convergence, the eigenfunction equation, and agreement with a
//! brute-force quadrature oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CaseReport, SuiteReport};
use crate::boundary::BoundaryData;
use crate::convergents::ConvergentTable;
use crate::digits::DigitSequence;
use crate::field::{
    self, eigenfunction_residual, f_eval, f_oracle, field_sample, field_sample_with_w,
    second_variation_total, synthetic_eigen_residual, synthetic_eigenfunction_residual,
    SyntheticMode,
};
use crate::kernel;

/// Running f64 minimum-slack tally over many instances.
struct Slack {
    worst: f64,
    failures: usize,
    total: usize,
}

impl Slack {
    fn new() -> Self {
        Slack {
            worst: f64::INFINITY,
            failures: 0,
            total: 0,
        }
    }
    fn push(&mut self, slack: f64) {
        self.total += 1;
        if !(slack >= 0.0) {
            self.failures += 1;
        }
        self.worst = self.worst.min(slack);
    }
    fn case(self, name: &str, inputs: String, bound: &str) -> CaseReport {
        let pass = self.failures == 0;
        CaseReport {
            name: name.to_string(),
            inputs,
            measured: format!(
                "{} instances, {} failed, worst slack {:.6e}",
                self.total, self.failures, self.worst
            ),
            bound: bound.to_string(),
            margin: if pass { self.worst } else { -1.0 },
            pass,
        }
    }
}

pub fn suite(b: &BoundaryData, seed: u64) -> SuiteReport {
    let mut cases = Vec::new();
    let ah = b.alpha_hat_f64();

    // Kernel unit mass: the full-line integral of the boundary kernel is
    // exactly one half on each side of s = 0.
    {
        let mut worst = 0.0f64;
        for y in [0.05, 0.3, 1.0, 2.5] {
            worst = worst.max((kernel::delta_p(f64::NEG_INFINITY, f64::INFINITY, y) - 1.0).abs());
            worst = worst.max((kernel::cum(0.0, y) - 0.5).abs());
        }
        cases.push(CaseReport::le(
            "kernel-unit-mass",
            "y in {0.05, 0.3, 1.0, 2.5}".into(),
            worst,
            0.0,
        ));
    }

    // 10 x 10 grid over (ah, ah+1] x (0, 1]: the algebraic and the
    // double-integral routes to w agree to 1e-6 relative, and both f and w
    // stay positive.
    {
        let pts: Vec<(f64, f64)> = (1..=10)
            .flat_map(|i| (1..=10).map(move |k| (i as f64 / 10.0, k as f64 / 10.0)))
            .collect();
        let samples: Vec<_> = pts
            .par_iter()
            .map(|&(dx, y)| field_sample_with_w(b, ah + dx, y, f64::INFINITY))
            .collect();
        let mut rel = Slack::new();
        let mut fpos = Slack::new();
        let mut wpos = Slack::new();
        let mut skew = Slack::new();
        let mut err = None;
        for s in samples {
            match s {
                Ok(s) => {
                    let wi = s.w_int.unwrap_or(f64::NAN);
                    rel.push(1e-6 - ((wi - s.w_alg) / s.w_alg).abs());
                    fpos.push(s.f);
                    wpos.push(s.w_alg);
                    let cross = s.v1[0] * s.v2[1] - s.v1[1] * s.v2[0];
                    skew.push(1e-10 - ((cross - s.y * s.w_alg) / (s.y * s.w_alg)).abs());
                }
                Err(e) => err = Some(e.to_string()),
            }
        }
        if let Some(e) = err {
            cases.push(CaseReport::exact(
                "w-two-routes",
                "10x10 grid".into(),
                false,
                &e,
            ));
        } else {
            let grid = format!("10x10 grid on (ah, ah+1] x (0, 1], ah = {ah:.6}");
            cases.push(rel.case("w-two-routes", grid.clone(), "rel diff <= 1e-6"));
            cases.push(fpos.case("f-positive", grid.clone(), "f > 0"));
            cases.push(wpos.case("w-positive", grid.clone(), "w > 0"));
            cases.push(skew.case(
                "frame-skew-identity",
                grid,
                "|v1 x v2 - y w| <= 1e-10 rel",
            ));
        }
    }

    // Odd symmetry about the reflection centre, up to the truncation error
    // on each side.
    {
        let mut tally = Slack::new();
        for s in [0.05, 0.3, 1.1] {
            for y in [0.1, 0.7] {
                let plus = field_sample(b, ah + s, y, f64::INFINITY);
                let minus = field_sample(b, ah - s, y, f64::INFINITY);
                match (plus, minus) {
                    (Ok(p), Ok(m)) => {
                        let budget = p.trunc_bound + m.trunc_bound + 1e-12;
                        tally.push(budget - (p.f + m.f).abs());
                    }
                    _ => tally.push(f64::NEG_INFINITY),
                }
            }
        }
        cases.push(tally.case(
            "odd-symmetry",
            "s in {0.05, 0.3, 1.1}, y in {0.1, 0.7}".into(),
            "|f(ah+s) + f(ah-s)| within summed truncation budgets",
        ));
    }

    // Truncation honesty: a shallow table's field stays within the summed
    // truncation budgets of a deep one, and budgets shrink with depth.
    {
        let digits = b.table().digits();
        let shallow_depth = (digits.len() / 4).max(3);
        let shallow = DigitSequence::inline(digits[..shallow_depth].to_vec())
            .and_then(|seq| ConvergentTable::build(&seq, shallow_depth))
            .map(BoundaryData::new);
        match shallow {
            Ok(sh) => {
                let mut fdiff = Slack::new();
                let mut gdiff = Slack::new();
                let mut mono = Slack::new();
                for (dx, y) in [(0.02, 0.05), (0.3, 0.4), (-0.1, 0.2), (1.0, 1.0)] {
                    let a = field_sample(&sh, ah + dx, y, f64::INFINITY);
                    let d = field_sample(b, ah + dx, y, f64::INFINITY);
                    match (a, d) {
                        (Ok(a), Ok(d)) => {
                            fdiff.push(a.trunc_bound + d.trunc_bound - (a.f - d.f).abs());
                            gdiff.push(
                                a.grad_trunc + d.grad_trunc - (a.f_x - d.f_x).abs(),
                            );
                            mono.push(a.trunc_bound - d.trunc_bound);
                        }
                        _ => fdiff.push(f64::NEG_INFINITY),
                    }
                }
                let inputs = format!("J = {} vs J = {}", shallow_depth, digits.len());
                cases.push(fdiff.case("truncation-honest-f", inputs.clone(), "|f_sh - f_dp| within budgets"));
                cases.push(gdiff.case("truncation-honest-grad", inputs.clone(), "|fx_sh - fx_dp| within budgets"));
                cases.push(mono.case("truncation-monotone", inputs, "deep budget <= shallow budget"));
            }
            Err(e) => cases.push(CaseReport::exact(
                "truncation-honest-f",
                "shallow rebuild".into(),
                false,
                &e.to_string(),
            )),
        }
    }

    // Boundary convergence: |f(x, y) - u(x)| <= y V / 2 at edge midpoints.
    {
        let v_total = second_variation_total(b);
        let mut tally = Slack::new();
        for j in [1usize, 2] {
            let a_j = crate::rat::rat_to_f64(b.table().corner(j));
            let a_prev = crate::rat::rat_to_f64(b.table().corner(j - 1));
            let mid = 0.5 * (a_j + a_prev);
            for y in [0.05, 0.01] {
                match (f_eval(b, mid, y, f64::INFINITY), b.boundary_u(mid)) {
                    (Ok(f), Ok(u)) => tally.push(0.5 * y * v_total - (f - u).abs()),
                    _ => tally.push(f64::NEG_INFINITY),
                }
            }
        }
        cases.push(tally.case(
            "boundary-convergence",
            format!("edge midpoints j=1,2; V = {v_total:.3}"),
            "|f - u| <= y V / 2",
        ));
    }

    // Agreement with the quadrature oracle at seeded random points.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<(f64, f64)> = (0..100)
            .map(|_| {
                (
                    ah + rng.random_range(-2.0..2.0),
                    rng.random_range(0.05..1.5),
                )
            })
            .collect();
        let worst = pts
            .par_iter()
            .map(|&(x, y)| {
                let a = f_eval(b, x, y, f64::INFINITY);
                let o = f_oracle(b, x, y, 1e-9);
                match (a, o) {
                    (Ok(a), Ok(o)) => (a - o).abs(),
                    _ => f64::INFINITY,
                }
            })
            .reduce(|| 0.0, f64::max);
        cases.push(CaseReport::le(
            "field-vs-quadrature-oracle",
            "100 seeded points, x in ah +/- 2, y in [0.05, 1.5]".into(),
            worst,
            1e-8,
        ));
    }

    // Kink superposition: each slope jump Dm at a join c contributes
    // Dm ((x - c) + rho) / 2 to the field, so after folding the linear parts
    // back into the boundary value,
    //   f(x, y) = u(x) + (1/2) sum_i Dm_i y^2 / (rho_i + |x - c_i|),
    // and both partials have matching closed forms. Checked on a shallow
    // rebuild (depth <= 6), where the f64 slope magnitudes keep the
    // summation roundoff far below the tolerance; per-point tolerances
    // scale with the accumulated term magnitudes.
    {
        let digits = b.table().digits();
        let depth = digits.len().min(6);
        let shallow = DigitSequence::inline(digits[..depth].to_vec())
            .and_then(|seq| ConvergentTable::build(&seq, depth))
            .map(BoundaryData::new);
        match shallow {
            Ok(sh) => {
                let sa = sh.alpha_hat_f64();
                let segs = sh.segments();
                let mut tally = Slack::new();
                let pts = [
                    (0.35, 0.25),
                    (0.8, 0.8),
                    (1.7, 0.45),
                    (0.5, 1.3),
                    (-0.6, 0.7),
                    (2.4, 0.2),
                ];
                for (dx, y) in pts {
                    let x = sa + dx;
                    let parts = field_sample(&sh, x, y, f64::INFINITY)
                        .and_then(|s| Ok((s, sh.boundary_u(x)?, sh.slope_intercept(x)?)));
                    let Ok((s, u, (mu_loc, _))) = parts else {
                        tally.push(f64::NEG_INFINITY);
                        continue;
                    };
                    let (mut f_cf, mut fx_cf, mut fy_cf) = (u, mu_loc, 0.0f64);
                    let (mut bf, mut bx, mut by) = (1.0f64, 1.0f64, 1.0f64);
                    for i in 0..segs.len() - 1 {
                        let dm = segs[i + 1].mu - segs[i].mu;
                        let sx = x - segs[i].hi;
                        let rho = sx.hypot(y);
                        let (tf, tx, ty) = (y * y / (rho + sx.abs()), sx / rho - sx.signum(), y / rho);
                        f_cf += 0.5 * dm * tf;
                        fx_cf += 0.5 * dm * tx;
                        fy_cf += 0.5 * dm * ty;
                        bf += (dm * tf).abs();
                        bx += (dm * tx).abs();
                        by += (dm * ty).abs();
                    }
                    tally.push(1e-13 * bf - (f_cf - s.f).abs());
                    tally.push(1e-13 * bx - (fx_cf - s.f_x).abs());
                    tally.push(1e-13 * by - (fy_cf - s.f_y).abs());
                }
                cases.push(tally.case(
                    "kink-superposition",
                    format!("closed form over {} joins at depth {depth}, 6 points", segs.len() - 1),
                    "f, f_x, f_y each within 1e-13 of term-magnitude budget",
                ));
            }
            Err(e) => cases.push(CaseReport::exact(
                "kink-superposition",
                "shallow rebuild".into(),
                false,
                &e.to_string(),
            )),
        }
    }

    // Eigenfunction equation, normalized form, at seeded random points.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5_a5a5);
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|_| {
                (
                    ah + rng.random_range(-2.0..2.0),
                    rng.random_range(0.05..2.0),
                )
            })
            .collect();
        let worst = pts
            .par_iter()
            .map(|&(x, y)| {
                let h = (y / 8.0).min(1e-2);
                eigenfunction_residual(b, x, y, h, f64::INFINITY).unwrap_or(f64::INFINITY)
            })
            .reduce(|| 0.0, f64::max);
        cases.push(CaseReport::le(
            "eigenfunction-residual",
            "20 seeded points, y in [0.05, 2]".into(),
            worst,
            1e-4,
        ));
    }

    // Synthetic closed-form modes: residuals at machine scale.
    {
        let mut worst = 0.0f64;
        for mode in [SyntheticMode::Linear, SyntheticMode::Sgn] {
            for (dx, y) in [(0.34, 0.41), (-0.9, 0.8), (1.5, 0.3), (0.1, 1.2), (2.0, 1.9)] {
                let r = synthetic_eigen_residual(mode, ah, ah + dx, y, 1e-2)
                    .unwrap_or(f64::INFINITY);
                let rn = synthetic_eigenfunction_residual(mode, ah, ah + dx, y, 1e-2)
                    .unwrap_or(f64::INFINITY);
                worst = worst.max(r).max(rn);
            }
        }
        cases.push(CaseReport::le(
            "synthetic-eigen-residual",
            "linear + jump modes, 5 points each, both residual forms".into(),
            worst,
            1e-8,
        ));
    }

    // Refusal paths: the evaluator declines rather than silently degrading.
    {
        let (gl, gh) = b.gap_interval();
        let gap_mid = 0.5 * (gl + gh);
        let budget_err = field_sample(b, gap_mid, 0.5, 1e-30).is_err();
        let w_err = field::w_integral(b, ah + 0.5, 1e-4).is_err();
        cases.push(CaseReport::exact(
            "refusal-paths",
            "tiny budget at gap centre; w integral at y = 1e-4".into(),
            budget_err && w_err,
            &format!("budget refused: {budget_err}, w refused: {w_err}"),
        ));
    }

    SuiteReport::new("field", cases)
}
