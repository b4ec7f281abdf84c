//! Boundary data: the piecewise-linear envelope, its odd extension, and the
//! positivity kernel `D` on slope/intercept labels.
//!
//! The envelope of a depth-J table is
//!
//! ```text
//! eta(x) = m_j x - n_j   on [a_j, a_{j-1})        (j = 1..J)
//! eta(x) = 1             on [a_0, +inf)            (label (0, -1))
//! eta(x) = 0             for x <= alpha
//! ```
//!
//! and the boundary datum of the metric construction is the odd extension
//! `u(x) = eta(x) - eta(2 alpha - x)` about alpha. A truncated table only
//! knows alpha to within the enclosure `[n_J/m_J, a_J]`, so the reflection is
//! taken about the midpoint `alpha_hat` and the window
//! `(2 alpha_hat - a_J, a_J)` stays unresolved. Across that window the
//! truncated datum `u_J` interpolates linearly (the chord has slope exactly
//! `2 m_J` and passes through `(alpha_hat, 0)`), which keeps `u_J` continuous
//! and odd; `sup |u - u_J| <= 3 b_J` on the window and `<= b_J` left of it,
//! zero to the right.
//!
//! Interval convention: every interval is half-open `[lo, hi)`, so a query
//! exactly at a breakpoint resolves to the interval on its *right*. The one
//! exception is the left edge of the unresolved window, which
//! [`BoundaryData::slope_intercept`] attributes to the last resolved piece on
//! the left rather than to the chord (the chord is an integration device, not
//! boundary data).
//!
//! Float evaluation of `eta` and `u` converts the query to an exact rational,
//! evaluates `m_j x - n_j` exactly and rounds once: naive `f64` evaluation
//! loses all significance once `m_j` outgrows `2^53 / m_j`-sized gaps, which
//! happens by depth ~25.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::sync::OnceLock;

use crate::convergents::ConvergentTable;
use crate::error::{Error, Result};
use crate::rat::{rat_from_f64, rat_to_f64};

/// Envelope square-root bound constant: `eta(x) <= OMEGA sqrt(x - alpha)`.
pub const OMEGA: f64 = 5.656854249492381; // 4 sqrt(2)

/// One maximal interval on which the truncated boundary datum is affine,
/// `u(x) = mu x - nu`. Rays carry `lo = -inf` / `hi = +inf`; `u_lo`/`u_hi`
/// are the exact endpoint values rounded to `f64` (the constant ray value at
/// infinite ends).
#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub mu: f64,
    pub nu: f64,
    pub u_lo: f64,
    pub u_hi: f64,
}

/// Exact slope/intercept label of a segment.
#[derive(Clone, Debug)]
struct ExactSeg {
    mu: BigRational,
    nu: BigRational,
}

/// Odd-extended boundary data of a truncated convergent table.
#[derive(Debug)]
pub struct BoundaryData {
    table: ConvergentTable,
    alpha_hat: BigRational,
    alpha_hat_f64: f64,
    /// Exact breakpoints, ascending; `breaks[i]` is the right endpoint of
    /// segment `i`. Length = segments - 1 = 2 depth + 2.
    breaks: Vec<BigRational>,
    breaks_f64: Vec<f64>,
    exact_segs: Vec<ExactSeg>,
    segs: Vec<Segment>,
    /// Index of the chord segment spanning the unresolved window.
    gap: usize,
    /// `b_J` rounded to f64 (the truncation scale).
    weight_last: f64,
    /// Enclosure width rounded to f64.
    width: f64,
    /// Lazily computed pair determinants `mu_a nu_b - mu_b nu_a` (exact, then
    /// rounded once), flattened upper triangle; used by the `w` double sum.
    pair_dets: OnceLock<Vec<f64>>,
}

impl BoundaryData {
    pub fn new(table: ConvergentTable) -> Self {
        let depth = table.depth();
        let alpha_hat = table.alpha_hat();
        let two = BigRational::from_integer(2.into());
        let two_hat = &two * &alpha_hat;

        let reflect = |a: &BigRational| &two_hat - a;
        let rat = |m: &BigInt| BigRational::from_integer(m.clone());

        let mut breaks: Vec<BigRational> = Vec::with_capacity(2 * depth + 2);
        let mut exact_segs: Vec<ExactSeg> = Vec::with_capacity(2 * depth + 3);
        let mut u_ends: Vec<(BigRational, BigRational)> = Vec::with_capacity(2 * depth + 3);

        // Left ray: u = -1, label (0, 1).
        exact_segs.push(ExactSeg {
            mu: BigRational::zero(),
            nu: BigRational::from_integer(1.into()),
        });
        u_ends.push((-BigRational::from_integer(1.into()), -BigRational::from_integer(1.into())));
        breaks.push(reflect(table.corner(0)));

        // Left pieces j = 1..=depth: [2ah - a_{j-1}, 2ah - a_j), label
        // (m_j, 2 ah m_j - n_j), u from -b_{j-1} to -b_j.
        for j in 1..=depth {
            let (m, n) = table.pair(j);
            exact_segs.push(ExactSeg {
                mu: rat(m),
                nu: &two_hat * rat(m) - rat(n),
            });
            u_ends.push((-table.weight(j - 1), -table.weight(j)));
            breaks.push(reflect(table.corner(j)));
        }

        // Chord across the unresolved window: slope exactly 2 m_J through
        // (alpha_hat, 0); meets the neighbours at -b_J / b_J exactly.
        let (m_last, _) = table.pair(depth);
        let chord_mu = rat(m_last) * &two;
        exact_segs.push(ExactSeg {
            nu: &chord_mu * &alpha_hat,
            mu: chord_mu,
        });
        u_ends.push((-table.weight(depth), table.weight(depth).clone()));
        breaks.push(table.corner(depth).clone());

        // Right pieces j = depth..=1: [a_j, a_{j-1}), label (m_j, n_j).
        for j in (1..=depth).rev() {
            let (m, n) = table.pair(j);
            exact_segs.push(ExactSeg { mu: rat(m), nu: rat(n) });
            u_ends.push((table.weight(j).clone(), table.weight(j - 1).clone()));
            breaks.push(table.corner(j - 1).clone());
        }

        // Right ray: u = 1, label (0, -1).
        exact_segs.push(ExactSeg {
            mu: BigRational::zero(),
            nu: -BigRational::from_integer(1.into()),
        });
        u_ends.push((BigRational::from_integer(1.into()), BigRational::from_integer(1.into())));

        let breaks_f64: Vec<f64> = breaks.iter().map(rat_to_f64).collect();
        let nsegs = exact_segs.len();
        let mut segs = Vec::with_capacity(nsegs);
        for (i, es) in exact_segs.iter().enumerate() {
            segs.push(Segment {
                lo: if i == 0 { f64::NEG_INFINITY } else { breaks_f64[i - 1] },
                hi: if i + 1 == nsegs { f64::INFINITY } else { breaks_f64[i] },
                mu: rat_to_f64(&es.mu),
                nu: rat_to_f64(&es.nu),
                u_lo: rat_to_f64(&u_ends[i].0),
                u_hi: rat_to_f64(&u_ends[i].1),
            });
        }

        let weight_last = rat_to_f64(table.weight(depth));
        let width = rat_to_f64(&table.enclosure_width());
        let alpha_hat_f64 = rat_to_f64(&alpha_hat);

        Self {
            gap: depth + 1,
            table,
            alpha_hat,
            alpha_hat_f64,
            breaks,
            breaks_f64,
            exact_segs,
            segs,
            weight_last,
            width,
            pair_dets: OnceLock::new(),
        }
    }

    pub fn table(&self) -> &ConvergentTable {
        &self.table
    }

    pub fn depth(&self) -> usize {
        self.table.depth()
    }

    pub fn alpha_hat(&self) -> &BigRational {
        &self.alpha_hat
    }

    pub fn alpha_hat_f64(&self) -> f64 {
        self.alpha_hat_f64
    }

    /// All affine pieces of `u_J`, ascending; includes both rays and the
    /// chord across the unresolved window (index [`Self::gap_index`]).
    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn gap_index(&self) -> usize {
        self.gap
    }

    /// `b_J` as a float: the scale of every truncation estimate.
    pub fn weight_last_f64(&self) -> f64 {
        self.weight_last
    }

    /// Enclosure width as a float.
    pub fn width_f64(&self) -> f64 {
        self.width
    }

    /// Segment index containing `x` (half-open `[lo, hi)` convention).
    pub fn segment_index(&self, x: f64) -> usize {
        self.breaks_f64.partition_point(|b| *b <= x)
    }

    fn segment_index_exact(&self, x: &BigRational) -> usize {
        self.breaks.partition_point(|b| b <= x)
    }

    /// Exact envelope value. Errors inside the open enclosure window, where
    /// the truncated table genuinely does not know eta.
    pub fn envelope_exact(&self, x: &BigRational) -> Result<BigRational> {
        let corners = self.table.corners();
        if x <= self.table.alpha_lo() {
            return Ok(BigRational::zero());
        }
        if x < self.table.alpha_hi() {
            return Err(Error::InsufficientDepth {
                x: x.to_f64().unwrap_or(f64::NAN),
                depth: self.depth(),
            });
        }
        // First j with a_j <= x; j = 0 means x >= 1, the constant-1 ray.
        let mut lo = 0usize;
        let mut hi = corners.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            if &corners[mid] <= x {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let j = lo;
        let (m, n) = self.table.pair(j);
        Ok(BigRational::from_integer(m.clone()) * x - BigRational::from_integer(n.clone()))
    }

    /// Envelope at a float point: exact evaluation, rounded once (within a
    /// few ulps of the true value at any depth).
    pub fn envelope_eval(&self, x: f64) -> Result<f64> {
        Ok(rat_to_f64(&self.envelope_exact(&rat_from_f64(x)?)?))
    }

    /// Exact truncated boundary datum `u_J` (defined on all of R; uses the
    /// chord across the unresolved window).
    pub fn boundary_u_exact(&self, x: &BigRational) -> BigRational {
        let es = &self.exact_segs[self.segment_index_exact(x)];
        &es.mu * x - &es.nu
    }

    /// `u_J` at a float point: exact evaluation, rounded once.
    pub fn boundary_u(&self, x: f64) -> Result<f64> {
        Ok(rat_to_f64(&self.boundary_u_exact(&rat_from_f64(x)?)))
    }

    /// Which resolved segment a point belongs to, for label queries: errors
    /// inside the open unresolved window (distinguishing the exact centre).
    fn resolved_index_exact(&self, x: &BigRational) -> Result<usize> {
        let idx = self.segment_index_exact(x);
        if idx == self.gap {
            if x == &self.breaks[self.gap - 1] {
                // Left edge of the window: last resolved left piece.
                return Ok(self.gap - 1);
            }
            if x == &self.alpha_hat {
                return Err(Error::AtReflectionCentre);
            }
            return Err(Error::InsufficientDepth {
                x: x.to_f64().unwrap_or(f64::NAN),
                depth: self.depth(),
            });
        }
        Ok(idx)
    }

    /// Exact slope/intercept `(mu, nu)` with `u(x) = mu x - nu` near `x`.
    pub fn slope_intercept_exact(&self, x: &BigRational) -> Result<(BigRational, BigRational)> {
        let es = &self.exact_segs[self.resolved_index_exact(x)?];
        Ok((es.mu.clone(), es.nu.clone()))
    }

    /// Float view of [`Self::slope_intercept_exact`].
    pub fn slope_intercept(&self, x: f64) -> Result<(f64, f64)> {
        let (mu, nu) = self.slope_intercept_exact(&rat_from_f64(x)?)?;
        Ok((rat_to_f64(&mu), rat_to_f64(&nu)))
    }

    /// The positivity kernel
    /// `D(x1, x2) = (mu(x1) nu(x2) - mu(x2) nu(x1)) (x1 - x2)`,
    /// evaluated exactly. Errors if either point is unresolved.
    pub fn d_eval_exact(&self, x1: &BigRational, x2: &BigRational) -> Result<BigRational> {
        let s1 = &self.exact_segs[self.resolved_index_exact(x1)?];
        let s2 = &self.exact_segs[self.resolved_index_exact(x2)?];
        let det = &s1.mu * &s2.nu - &s2.mu * &s1.nu;
        Ok(det * (x1 - x2))
    }

    /// Float view of [`Self::d_eval_exact`]: the label determinant is still
    /// taken exactly (float determinants of adjacent labels cancel to
    /// garbage), only the final product is rounded.
    pub fn d_eval(&self, x1: f64, x2: f64) -> Result<f64> {
        let r1 = rat_from_f64(x1)?;
        let r2 = rat_from_f64(x2)?;
        let s1 = &self.exact_segs[self.resolved_index_exact(&r1)?];
        let s2 = &self.exact_segs[self.resolved_index_exact(&r2)?];
        let det = rat_to_f64(&(&s1.mu * &s2.nu - &s2.mu * &s1.nu));
        Ok(det * (x1 - x2))
    }

    /// Pair determinants `mu_a nu_b - mu_b nu_a` for all segment pairs
    /// `a < b`, exact then rounded once; flattened row-major upper triangle.
    pub(crate) fn pair_dets(&self) -> &[f64] {
        self.pair_dets.get_or_init(|| {
            let n = self.exact_segs.len();
            let mut dets = Vec::with_capacity(n * (n - 1) / 2);
            for a in 0..n {
                for b in a + 1..n {
                    let (sa, sb) = (&self.exact_segs[a], &self.exact_segs[b]);
                    dets.push(rat_to_f64(&(&sa.mu * &sb.nu - &sb.mu * &sa.nu)));
                }
            }
            dets
        })
    }

    /// Upper bounds on `|u - u_J|`: `3 b_J` over the unresolved window,
    /// `b_J` strictly left of it, `0` to the right of it. (On the window:
    /// `|u| <= b_J + m_J * width = 2 b_J` and `|u_J| <= b_J`; left of it the
    /// reflection centre is off by at most `width/2` under slopes `<= m_J`,
    /// and `m_J * width = b_J` exactly.)
    pub fn trunc_sup_gap(&self) -> f64 {
        3.0 * self.weight_last
    }

    pub fn trunc_sup_left(&self) -> f64 {
        self.weight_last
    }

    /// The unresolved window `[2 alpha_hat - a_J, a_J]` as floats.
    pub fn gap_interval(&self) -> (f64, f64) {
        (self.breaks_f64[self.gap - 1], self.breaks_f64[self.gap])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DigitSequence;
    use crate::rat::ratio;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn all3(depth: usize) -> BoundaryData {
        let seq = DigitSequence::periodic(vec![3]).unwrap();
        BoundaryData::new(ConvergentTable::build(&seq, depth).unwrap())
    }

    #[test]
    fn frozen_envelope_values() {
        let b = all3(3);
        // On [a_1, a_0) the label is (1, 0): eta(x) = x exactly.
        assert_eq!(b.envelope_eval(0.7).unwrap(), 0.7);
        assert_eq!(b.envelope_eval(1.5).unwrap(), 1.0);
        // 0.4_f64 is one ulp off 2/5, so the exact evaluator reports
        // 3x - 1 for the actual float: equal to 1/5 within 2 ulps.
        assert!((b.envelope_eval(0.4).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(b.envelope_exact(&ratio(2, 5)).unwrap(), ratio(1, 5));
        assert_eq!(b.envelope_eval(0.2).unwrap(), 0.0); // left of the enclosure
    }

    #[test]
    fn envelope_errors_inside_window() {
        let b = all3(3); // enclosure (3/8, 5/13)
        let mid = 0.38; // 3/8 = 0.375 < 0.38 < 5/13 = 0.3846..
        assert!(matches!(
            b.envelope_eval(mid),
            Err(Error::InsufficientDepth { .. })
        ));
        // The endpoints themselves are fine.
        assert_eq!(b.envelope_exact(&ratio(3, 8)).unwrap(), ratio(0, 1));
        assert_eq!(b.envelope_exact(&ratio(5, 13)).unwrap(), ratio(1, 13));
    }

    #[test]
    fn frozen_boundary_u_values() {
        let b = all3(3);
        assert!((b.boundary_u(0.45).unwrap() - 0.35).abs() < 1e-15);
        assert_eq!(b.boundary_u(2.0).unwrap(), 1.0);
        assert_eq!(b.boundary_u(-2.0).unwrap(), -1.0);
    }

    #[test]
    fn frozen_slope_intercept() {
        let b = all3(3);
        assert_eq!(b.slope_intercept(0.7).unwrap(), (1.0, 0.0));
        assert_eq!(b.slope_intercept(2.0).unwrap(), (0.0, -1.0));
        assert_eq!(b.slope_intercept(0.45).unwrap(), (3.0, 1.0));
    }

    #[test]
    fn frozen_d_values() {
        let b = all3(3);
        // labels (1,0) at 0.7 and (3,1) at 0.45: det = 1, D = 0.25.
        assert!((b.d_eval(0.7, 0.45).unwrap() - 0.25).abs() < 1e-15);
        // Same interval: determinant vanishes identically.
        assert_eq!(b.d_eval(0.7, 0.8).unwrap(), 0.0);
        assert_eq!(b.d_eval(0.44, 0.46).unwrap(), 0.0);
    }

    #[test]
    fn window_label_queries_error() {
        let b = all3(3);
        assert!(matches!(
            b.slope_intercept(0.38),
            Err(Error::InsufficientDepth { .. })
        ));
        let hat = b.alpha_hat().clone();
        assert!(matches!(
            b.slope_intercept_exact(&hat),
            Err(Error::AtReflectionCentre)
        ));
        assert!(b.d_eval(0.38, 0.7).is_err());
        // Left window edge resolves to the last left piece (slope m_J = 8).
        let edge = BigRational::from_integer(2.into()) * b.alpha_hat() - ratio(5, 13);
        let (mu, _) = b.slope_intercept_exact(&edge).unwrap();
        assert_eq!(mu, ratio(8, 1));
    }

    #[test]
    fn tie_break_goes_right() {
        let b = all3(3);
        // x = a_1 = 1/2 belongs to [a_1, a_0) with label (m_1, n_1) = (1, 0).
        assert_eq!(b.slope_intercept(0.5).unwrap(), (1.0, 0.0));
        // x = a_0 = 1 belongs to the ray with label (0, -1).
        assert_eq!(b.slope_intercept(1.0).unwrap(), (0.0, -1.0));
    }

    #[test]
    fn chord_slope_is_twice_m_last() {
        let b = all3(3);
        let chord = &b.segments()[b.gap_index()];
        assert_eq!(chord.mu, 16.0); // 2 m_3 = 16
        let (gl, gr) = b.gap_interval();
        assert!(gl < b.alpha_hat_f64() && b.alpha_hat_f64() < gr);
        // Continuity at the window edges.
        assert!((chord.u_lo + b.weight_last_f64()).abs() < 1e-16);
        assert!((chord.u_hi - b.weight_last_f64()).abs() < 1e-16);
    }

    #[test]
    fn deep_tables_stay_accurate() {
        // At depth 60, slopes reach ~1e25; naive f64 evaluation of m x - n
        // is meaningless there, the exact path must stay within ~4 ulps.
        let b = all3(60);
        let x = 0.38196601125010515; // very close to alpha
        let exact = b.envelope_exact(&rat_from_f64(x).unwrap()).unwrap();
        let got = b.envelope_eval(x).unwrap();
        let ulp = got.abs().max(f64::MIN_POSITIVE) * f64::EPSILON;
        assert!((got - rat_to_f64(&exact)).abs() <= ulp);
        assert!(got > 0.0 && got < 1e-7);
    }

    #[test]
    fn segments_partition_the_line() {
        let b = all3(5);
        let segs = b.segments();
        assert_eq!(segs.len(), 2 * 5 + 3);
        assert_eq!(segs[0].lo, f64::NEG_INFINITY);
        assert_eq!(segs.last().unwrap().hi, f64::INFINITY);
        for k in 1..segs.len() {
            assert_eq!(segs[k].lo, segs[k - 1].hi);
        }
    }

    fn digit_seq_strategy() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(3u32..=9, 1..=12)
    }

    proptest! {
        /// u_J is exactly odd about alpha_hat, bounded by 1, and continuous
        /// across every breakpoint (checked in exact arithmetic).
        #[test]
        fn odd_bounded_continuous(digits in digit_seq_strategy(), t_num in -300i64..300) {
            let seq = DigitSequence::inline(digits.clone()).unwrap();
            let b = BoundaryData::new(ConvergentTable::build(&seq, digits.len()).unwrap());
            let hat = b.alpha_hat().clone();
            let t = ratio(t_num, 100);

            let plus = b.boundary_u_exact(&(&hat + &t));
            let minus = b.boundary_u_exact(&(&hat - &t));
            prop_assert_eq!(&plus + &minus, BigRational::zero());
            prop_assert!(plus.abs() <= ratio(1, 1));

            for i in 0..b.breaks.len() {
                let x = b.breaks[i].clone();
                let left_seg = &b.exact_segs[i];
                let right_seg = &b.exact_segs[i + 1];
                let from_left = &left_seg.mu * &x - &left_seg.nu;
                let from_right = &right_seg.mu * &x - &right_seg.nu;
                prop_assert_eq!(from_left, from_right);
            }
        }

        /// The envelope clamps to [0, 1] and is monotone nondecreasing.
        #[test]
        fn envelope_monotone(digits in digit_seq_strategy(), xa in 0.0f64..2.0, xb in 0.0f64..2.0) {
            let seq = DigitSequence::inline(digits.clone()).unwrap();
            let b = BoundaryData::new(ConvergentTable::build(&seq, digits.len()).unwrap());
            let (lo, hi) = (xa.min(xb), xa.max(xb));
            let (elo, ehi) = match (b.envelope_eval(lo), b.envelope_eval(hi)) {
                (Ok(a), Ok(c)) => (a, c),
                _ => return Ok(()), // one endpoint in the unresolved window
            };
            prop_assert!((0.0..=1.0).contains(&elo));
            prop_assert!((0.0..=1.0).contains(&ehi));
            prop_assert!(elo <= ehi);
        }
    }
}
