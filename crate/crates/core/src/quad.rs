//! Adaptive Simpson quadrature.
//!
//! Deliberately plain: this is the *independent oracle* that brute-force
//! checks the closed-form kernel primitives and the field evaluator, so it
//! must not share any code with them.

use crate::error::{Error, Result};

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
///
/// Classic recursive scheme with the 15-fold error estimate; errors out if
/// the recursion depth is exhausted before the budget is met.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut achieved: f64 = 0.0;
    let v = recurse(f, a, b, fa, fm, fb, whole, tol, max_depth, &mut achieved);
    if achieved > tol {
        return Err(Error::Quadrature {
            requested: tol,
            achieved,
        });
    }
    Ok(v)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    achieved: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = (left + right - whole) / 15.0;
    if err.abs() <= tol || depth == 0 {
        if depth == 0 {
            *achieved = achieved.max(err.abs());
        }
        return left + right + err;
    }
    let half = 0.5 * tol;
    recurse(f, a, m, fa, flm, fm, left, half, depth - 1, achieved)
        + recurse(f, m, b, fm, frm, fb, right, half, depth - 1, achieved)
}

/// Fixed-panel composite Simpson (for smooth probe integrands where a
/// deterministic sample count is preferable to adaptivity).
pub fn composite_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    let mut fa = f(a);
    for i in 0..n {
        let x0 = a + i as f64 * h;
        let x1 = x0 + h;
        let fm = f(0.5 * (x0 + x1));
        let fb = f(x1);
        sum += h / 6.0 * (fa + 4.0 * fm + fb);
        fa = fb;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12, 40).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-12, 48).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn reports_stalls() {
        // A genuine C^0 kink is fine; an unresolvable spike at max_depth 2 is not.
        let spike = |x: f64| 1.0 / ((x - 0.3123).abs() + 1e-14).sqrt();
        assert!(adaptive_simpson(&spike, 0.0, 1.0, 1e-12, 2).is_err());
    }

    #[test]
    fn composite_matches_adaptive() {
        let f = |x: f64| 1.0 / (1.0 + x * x);
        let a = composite_simpson(&f, -1.0, 3.0, 400);
        let b = adaptive_simpson(&f, -1.0, 3.0, 1e-12, 40).unwrap();
        assert!((a - b).abs() < 1e-9);
    }
}
