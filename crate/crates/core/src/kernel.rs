//! Closed-form primitives of the Poisson-type kernel
//! `k_y(s) = y^2 / (2 (s^2 + y^2)^{3/2})`, which has unit mass for every
//! `y > 0` and reproduces boundary values as `y -> 0`.
//!
//! Everything the field evaluator needs is an antiderivative evaluated at
//! segment endpoints `s = t - x`:
//!
//! ```text
//! P(s)  = integral of k             = s / (2 r),          r = sqrt(s^2+y^2)
//! C(s)  = kernel mass of (-inf, s]  = 1/2 + P(s)
//! Q(s)  = integral of s k           = -y^2 / (2 r)
//! Py(s) = dP/dy                     = -s y / (2 r^3)
//! Qy(s) = dQ/dy                     = -y (2 s^2 + y^2) / (2 r^3)
//! ```
//!
//! Differences like `P(s1) - P(s0)` cancel catastrophically when both ends
//! sit far on the same side of the singularity, so the pair forms below
//! rationalize them (`s1 r0 - s0 r1 = y^2 (s1^2 - s0^2) / (s1 r0 + s0 r1)`
//! whenever `s0, s1` share a sign). Infinite endpoints take their exact
//! limits. All functions require `y > 0`.

/// The kernel itself; zero at infinite argument.
pub fn kern(s: f64, y: f64) -> f64 {
    if s.is_infinite() {
        return 0.0;
    }
    let r = s.hypot(y);
    y * y / (2.0 * r * r * r)
}

/// Kernel mass of `(-inf, s]`, in `[0, 1]`; stable against cancellation for
/// very negative `s`.
pub fn cum(s: f64, y: f64) -> f64 {
    if s == f64::NEG_INFINITY {
        return 0.0;
    }
    if s == f64::INFINITY {
        return 1.0;
    }
    let r = s.hypot(y);
    if s >= 0.0 {
        0.5 * (1.0 + s / r)
    } else {
        // (r + s)/(2r) = y^2 / (2 r (r - s)) without the subtraction.
        y * y / (2.0 * r * (r - s))
    }
}

/// Kernel mass of `[s, +inf)`.
pub fn cum_right(s: f64, y: f64) -> f64 {
    cum(-s, y)
}

/// `integral_{s0}^{s1} k_y`; endpoints may be infinite, `s0 <= s1`.
pub fn delta_p(s0: f64, s1: f64, y: f64) -> f64 {
    debug_assert!(s0 <= s1);
    if s0 == s1 {
        return 0.0;
    }
    match (s0.is_infinite(), s1.is_infinite()) {
        (true, true) => 1.0,
        (true, false) => cum(s1, y),
        (false, true) => cum_right(s0, y),
        (false, false) => {
            let r0 = s0.hypot(y);
            let r1 = s1.hypot(y);
            num_sr(s0, s1, r0, r1, y) / (2.0 * r0 * r1)
        }
    }
}

/// Stable `s1 r0 - s0 r1` (the only difference in these primitives that can
/// cancel): rationalized when `s0, s1` share a sign, direct otherwise.
fn num_sr(s0: f64, s1: f64, r0: f64, r1: f64, y: f64) -> f64 {
    if s0 >= 0.0 || s1 <= 0.0 {
        y * y * (s1 - s0) * (s1 + s0) / (s1 * r0 + s0 * r1)
    } else {
        s1 * r0 - s0 * r1
    }
}

/// `integral_{s0}^{s1} s k_y`; endpoints may be infinite, `s0 <= s1`.
pub fn delta_q(s0: f64, s1: f64, y: f64) -> f64 {
    debug_assert!(s0 <= s1);
    if s0 == s1 {
        return 0.0;
    }
    match (s0.is_infinite(), s1.is_infinite()) {
        (true, true) => 0.0,
        // Q(+-inf) = 0, Q(s) = -y^2/(2r).
        (true, false) => -y * y / (2.0 * s1.hypot(y)),
        (false, true) => y * y / (2.0 * s0.hypot(y)),
        (false, false) => {
            let r0 = s0.hypot(y);
            let r1 = s1.hypot(y);
            // Q(s1) - Q(s0) = y^2 (r1 - r0) / (2 r0 r1), rationalized.
            y * y * (s1 - s0) * (s1 + s0) / (2.0 * r0 * r1 * (r0 + r1))
        }
    }
}

/// The linear-part factor for a finite segment `[t0, t1)` with endpoint
/// values `u0, u1`: the segment's field contribution is
/// `u0 * delta_p + (u1 - u0) * gee`, where
/// `gee = (1/len) integral (s - s0) k_y = (s1 r0 - s0 r1) / (2 r1 (r0 + r1))`.
pub fn gee(s0: f64, s1: f64, y: f64) -> f64 {
    debug_assert!(s0.is_finite() && s1.is_finite() && s0 <= s1);
    if s0 == s1 {
        return 0.0;
    }
    let r0 = s0.hypot(y);
    let r1 = s1.hypot(y);
    num_sr(s0, s1, r0, r1, y) / (2.0 * r1 * (r0 + r1))
}

/// `dP/dy`; zero at infinite argument.
pub fn dp_dy(s: f64, y: f64) -> f64 {
    if s.is_infinite() {
        return 0.0;
    }
    let r = s.hypot(y);
    -s * y / (2.0 * r * r * r)
}

/// `dQ/dy`; zero at infinite argument.
pub fn dq_dy(s: f64, y: f64) -> f64 {
    if s.is_infinite() {
        return 0.0;
    }
    let r = s.hypot(y);
    -y * (2.0 * s * s + y * y) / (2.0 * r * r * r)
}

/// `d(gee)/dy` for a finite segment:
/// `gee_y = Py(s1) + y (s0 + s1) / (2 (r0 + r1) r0 r1)`.
pub fn gee_y(s0: f64, s1: f64, y: f64) -> f64 {
    debug_assert!(s0.is_finite() && s1.is_finite() && s0 <= s1);
    if s0 == s1 {
        return 0.0;
    }
    let r0 = s0.hypot(y);
    let r1 = s1.hypot(y);
    dp_dy(s1, y) + y * (s0 + s1) / (2.0 * (r0 + r1) * r0 * r1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_simpson;

    const YS: [f64; 4] = [0.07, 0.5, 1.0, 3.0];

    #[test]
    fn kernel_has_unit_mass() {
        for &y in &YS {
            assert_eq!(delta_p(f64::NEG_INFINITY, f64::INFINITY, y), 1.0);
            let direct = adaptive_simpson(&|s| kern(s, y), -2000.0 * y, 2000.0 * y, 1e-12, 60)
                .unwrap();
            assert!((direct - 1.0).abs() < 1e-6, "tail mass only");
        }
    }

    #[test]
    fn delta_p_matches_quadrature() {
        for &y in &YS {
            for &(s0, s1) in &[(-3.0, -1.0), (-1.0, 2.0), (0.5, 0.9), (4.0, 11.0)] {
                let direct = adaptive_simpson(&|s| kern(s, y), s0, s1, 1e-13, 60).unwrap();
                let closed = delta_p(s0, s1, y);
                assert!((direct - closed).abs() < 1e-11, "y={y} [{s0},{s1}]");
            }
        }
    }

    #[test]
    fn delta_q_matches_quadrature() {
        for &y in &YS {
            for &(s0, s1) in &[(-3.0, -1.0), (-1.0, 2.0), (0.5, 0.9)] {
                let direct =
                    adaptive_simpson(&|s| s * kern(s, y), s0, s1, 1e-13, 60).unwrap();
                let closed = delta_q(s0, s1, y);
                assert!((direct - closed).abs() < 1e-11, "y={y} [{s0},{s1}]");
            }
        }
    }

    #[test]
    fn gee_matches_quadrature() {
        for &y in &YS {
            for &(s0, s1) in &[(-2.0, -0.5), (-0.3, 1.1), (1.0, 2.0)] {
                let len = s1 - s0;
                let direct =
                    adaptive_simpson(&|s| (s - s0) * kern(s, y), s0, s1, 1e-13, 60).unwrap();
                let closed = gee(s0, s1, y) * len;
                assert!((direct - closed).abs() < 1e-11, "y={y} [{s0},{s1}]");
            }
        }
    }

    #[test]
    fn y_derivatives_match_finite_differences() {
        let h = 1e-5;
        for &y in &[0.5, 1.3] {
            for &s in &[-2.0, -0.4, 0.7, 3.0] {
                let fd_p = (cum(s, y + h) - cum(s, y - h)) / (2.0 * h);
                assert!((fd_p - dp_dy(s, y)).abs() < 1e-9, "P_y at s={s}, y={y}");
                let q = |yy: f64| -yy * yy / (2.0 * s.hypot(yy));
                let fd_q = (q(y + h) - q(y - h)) / (2.0 * h);
                assert!((fd_q - dq_dy(s, y)).abs() < 1e-9, "Q_y at s={s}, y={y}");
            }
            for &(s0, s1) in &[(-2.0, -0.5), (-0.3, 1.1), (1.0, 2.0)] {
                let fd_g = (gee(s0, s1, y + h) - gee(s0, s1, y - h)) / (2.0 * h);
                assert!((fd_g - gee_y(s0, s1, y)).abs() < 1e-9, "G_y at [{s0},{s1}], y={y}");
            }
        }
    }

    #[test]
    fn same_sign_differences_do_not_cancel() {
        // Far on one side, the naive P difference loses everything; the
        // rationalized form keeps full relative accuracy.
        let y = 1.0e-3;
        let (s0, s1) = (50.0, 50.0 + 1e-9);
        let closed = delta_p(s0, s1, y);
        // Integrand is ~ y^2/(2 s^3) and nearly constant over the interval.
        let expect = y * y / (2.0 * s0.powi(3)) * (s1 - s0);
        assert!(closed > 0.0);
        assert!((closed - expect).abs() / expect < 1e-9);
    }

    #[test]
    fn degenerate_segments_vanish() {
        assert_eq!(delta_p(2.0, 2.0, 0.5), 0.0);
        assert_eq!(delta_q(-1.0, -1.0, 0.5), 0.0);
        assert_eq!(gee(0.3, 0.3, 0.5), 0.0);
        assert_eq!(gee_y(0.3, 0.3, 0.5), 0.0);
    }
}
