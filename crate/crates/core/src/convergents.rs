//! Exact convergent tables for minus-sign continued fractions.
//!
//! From digits `e_1, ..., e_J` the integer pairs `(m_j, n_j)` follow the
//! second-order recursion
//!
//! ```text
//! (m_0, n_0) = (0, -1),   (m_1, n_1) = (1, 0),
//! (m_{j+1}, n_{j+1}) = e_j (m_j, n_j) - (m_{j-1}, n_{j-1})    (j >= 1),
//! ```
//!
//! whose consecutive pairs are unimodular: `m_j n_{j+1} - m_{j+1} n_j = 1`.
//! The corners `a_j = (n_{j+1} - n_j)/(m_{j+1} - m_j)` strictly decrease to
//! the encoded number alpha, and the weights `b_j = 1/(m_{j+1} - m_j)` are
//! the envelope heights over the corners. Everything here is exact big-integer
//! arithmetic; floats never enter.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::digits::DigitSequence;
use crate::error::{Error, Result};
use crate::rat::{rat_string, rat_to_f64};

/// Exact table of convergent data truncated at a chosen depth.
#[derive(Clone, Debug)]
pub struct ConvergentTable {
    digits: Vec<u32>,
    bound: u32,
    metric_admissible: bool,
    /// `(m_j, n_j)` for `j = 0 ..= depth + 1`.
    pairs: Vec<(BigInt, BigInt)>,
    /// `a_j` for `j = 0 ..= depth`; strictly decreasing, `a_0 = 1`.
    corners: Vec<BigRational>,
    /// `b_j` for `j = 0 ..= depth`; strictly decreasing, `b_0 = 1`.
    weights: Vec<BigRational>,
    alpha_lo: BigRational,
    alpha_hi: BigRational,
}

impl ConvergentTable {
    /// Build the exact table from the first `depth >= 1` digits.
    pub fn build(seq: &DigitSequence, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Invalid("table depth must be at least 1".into()));
        }
        let digits = seq.take(depth)?;

        let mut pairs: Vec<(BigInt, BigInt)> = Vec::with_capacity(depth + 2);
        pairs.push((BigInt::zero(), -BigInt::one()));
        pairs.push((BigInt::one(), BigInt::zero()));
        for (j, &e) in digits.iter().enumerate() {
            let e = BigInt::from(e);
            let (m_prev, n_prev) = &pairs[j];
            let (m_cur, n_cur) = &pairs[j + 1];
            pairs.push((&e * m_cur - m_prev, &e * n_cur - n_prev));
        }

        let mut corners = Vec::with_capacity(depth + 1);
        let mut weights = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            let (m_j, n_j) = &pairs[j];
            let (m_next, n_next) = &pairs[j + 1];
            let dm = m_next - m_j;
            debug_assert!(dm.is_positive());
            corners.push(BigRational::new(n_next - n_j, dm.clone()));
            weights.push(BigRational::new(BigInt::one(), dm));
        }

        let (m_last, n_last) = &pairs[depth];
        let alpha_lo = BigRational::new(n_last.clone(), m_last.clone());
        let alpha_hi = corners[depth].clone();
        debug_assert!(alpha_lo < alpha_hi);

        Ok(Self {
            bound: *digits.iter().max().unwrap(),
            metric_admissible: digits.iter().all(|&e| e >= crate::digits::MIN_METRIC_DIGIT),
            digits,
            pairs,
            corners,
            weights,
            alpha_lo,
            alpha_hi,
        })
    }

    pub fn depth(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Largest digit used (the bound N).
    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn is_metric_admissible(&self) -> bool {
        self.metric_admissible
    }

    /// `(m_j, n_j)`; valid for `j = 0 ..= depth + 1`.
    pub fn pair(&self, j: usize) -> &(BigInt, BigInt) {
        &self.pairs[j]
    }

    pub fn pairs(&self) -> &[(BigInt, BigInt)] {
        &self.pairs
    }

    /// Corner `a_j`; valid for `j = 0 ..= depth`.
    pub fn corner(&self, j: usize) -> &BigRational {
        &self.corners[j]
    }

    pub fn corners(&self) -> &[BigRational] {
        &self.corners
    }

    /// Weight `b_j` (the envelope value at `a_j`); valid for `j = 0 ..= depth`.
    pub fn weight(&self, j: usize) -> &BigRational {
        &self.weights[j]
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Exact lower end of the enclosure, `n_J / m_J`.
    pub fn alpha_lo(&self) -> &BigRational {
        &self.alpha_lo
    }

    /// Exact upper end of the enclosure, `a_J`.
    pub fn alpha_hi(&self) -> &BigRational {
        &self.alpha_hi
    }

    /// Midpoint of the enclosure, the working stand-in for alpha.
    pub fn alpha_hat(&self) -> BigRational {
        (&self.alpha_lo + &self.alpha_hi) / BigRational::from_integer(2.into())
    }

    /// Exact enclosure width; equals `1 / (m_J (m_{J+1} - m_J))`.
    pub fn enclosure_width(&self) -> BigRational {
        &self.alpha_hi - &self.alpha_lo
    }

    /// Nearest-float view of alpha; accurate to ~1 ulp of the midpoint.
    pub fn alpha_f64(&self) -> f64 {
        rat_to_f64(&self.alpha_hat())
    }

    /// JSON export: big integers as decimal strings, rationals as "p/q".
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "digits": self.digits,
            "depth": self.depth(),
            "bound": self.bound,
            "metric_admissible": self.metric_admissible,
            "pairs": self.pairs.iter()
                .map(|(m, n)| json!([m.to_string(), n.to_string()]))
                .collect::<Vec<_>>(),
            "corners": self.corners.iter().map(rat_string).collect::<Vec<_>>(),
            "weights": self.weights.iter().map(rat_string).collect::<Vec<_>>(),
            "alpha_lo": rat_string(&self.alpha_lo),
            "alpha_hi": rat_string(&self.alpha_hi),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use proptest::prelude::*;

    fn table(digits: &[u32], depth: usize) -> ConvergentTable {
        let seq = DigitSequence::inline(digits.to_vec()).unwrap();
        ConvergentTable::build(&seq, depth).unwrap()
    }

    fn all3(depth: usize) -> ConvergentTable {
        let seq = DigitSequence::periodic(vec![3]).unwrap();
        ConvergentTable::build(&seq, depth).unwrap()
    }

    /// Independent oracle: the pair `(n_j; m_j)` is the matrix product
    /// `M_1 M_2 ... M_{j-1}` of companions `M_k = [[0, 1], [-1, e_k]]`
    /// applied to the seed column `(0; 1)` — rightmost factor acts first.
    fn matrix_oracle(digits: &[u32], j: usize) -> (BigInt, BigInt) {
        // state = (n; m) as a column vector.
        let (mut n, mut m) = (BigInt::zero(), BigInt::one());
        for &e in digits.iter().take(j.saturating_sub(1)).rev() {
            let (n2, m2) = (m.clone(), -&n + BigInt::from(e) * &m);
            n = n2;
            m = m2;
        }
        (m, n)
    }

    #[test]
    fn pairs_match_matrix_product_oracle() {
        let cases: Vec<Vec<u32>> = vec![
            vec![3, 3, 3, 3, 3, 3],
            vec![3, 4, 3],
            vec![4, 5, 6, 7],
            vec![12, 3, 12, 3],
            vec![2, 2, 2, 2],
        ];
        for digits in cases {
            let depth = digits.len();
            let t = table(&digits, depth);
            for j in 1..=depth + 1 {
                let (m, n) = matrix_oracle(&digits, j);
                assert_eq!(t.pair(j), &(m, n), "digits {digits:?}, j = {j}");
            }
        }
    }

    #[test]
    fn frozen_all3_values() {
        let t = all3(4);
        // m_j = 0, 1, 3, 8, 21, 55; n_j = m_{j-1}.
        let m: Vec<i64> = vec![0, 1, 3, 8, 21, 55];
        for j in 0..=5 {
            assert_eq!(t.pair(j).0, BigInt::from(m[j]));
        }
        assert_eq!(t.pair(2), &(BigInt::from(3), BigInt::from(1)));
        assert_eq!(t.pair(3), &(BigInt::from(8), BigInt::from(3)));
        assert_eq!(t.pair(4), &(BigInt::from(21), BigInt::from(8)));

        assert_eq!(t.corner(0), &ratio(1, 1));
        assert_eq!(t.corner(1), &ratio(1, 2));
        assert_eq!(t.corner(2), &ratio(2, 5));
        assert_eq!(t.weight(1), &ratio(1, 2));
        assert_eq!(t.weight(2), &ratio(1, 5));
    }

    #[test]
    fn frozen_343_pair() {
        let t = table(&[3, 4, 3], 3);
        assert_eq!(t.pair(3), &(BigInt::from(11), BigInt::from(4)));
        assert_eq!(t.pair(4), &(BigInt::from(30), BigInt::from(11)));
    }

    #[test]
    fn frozen_all3_enclosure() {
        let t = all3(3);
        assert_eq!(t.alpha_lo(), &ratio(3, 8));
        assert_eq!(t.alpha_hi(), &ratio(5, 13));
        // width = 1 / (m_3 (m_4 - m_3)) = 1 / (8 * 13)
        assert_eq!(t.enclosure_width(), ratio(1, 104));
    }

    #[test]
    fn alpha_f64_converges_to_golden_ratio_value() {
        // alpha for all-3 digits is 1/phi^2 = (3 - sqrt 5)/2.
        let alpha = (3.0 - 5.0f64.sqrt()) / 2.0;
        let t = all3(30);
        assert!((t.alpha_f64() - alpha).abs() < 1e-15);
    }

    #[test]
    fn depth_errors() {
        let seq = DigitSequence::inline(vec![3, 4]).unwrap();
        assert!(ConvergentTable::build(&seq, 3).is_err());
        assert!(ConvergentTable::build(&seq, 0).is_err());
    }

    #[test]
    fn json_round_trips_key_fields() {
        let t = all3(3);
        let v = t.to_json();
        assert_eq!(v["alpha_lo"], "3/8");
        assert_eq!(v["alpha_hi"], "5/13");
        assert_eq!(v["pairs"][4][0], "21");
        assert_eq!(v["corners"][2], "2/5");
    }

    fn digit_seq_strategy() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(2u32..=12, 1..=24)
    }

    proptest! {
        /// Exact invariants of every table: unimodularity of consecutive
        /// pairs, the digit as the two-step determinant, corner monotonicity,
        /// weight positivity, and the envelope-at-corner identity
        /// m_j a_j - n_j = b_j = m_{j+1} a_j - n_{j+1}.
        #[test]
        fn exact_invariants(digits in digit_seq_strategy()) {
            let depth = digits.len();
            let t = table(&digits, depth);

            for j in 0..=depth {
                let (m0, n0) = t.pair(j);
                let (m1, n1) = t.pair(j + 1);
                prop_assert_eq!(m0 * n1 - m1 * n0, BigInt::one());
            }
            for j in 1..=depth {
                let (m_prev, n_prev) = t.pair(j - 1);
                let (m_next, n_next) = t.pair(j + 1);
                prop_assert_eq!(
                    m_prev * n_next - m_next * n_prev,
                    BigInt::from(digits[j - 1])
                );
            }
            for j in 1..=depth {
                // Exact gap identity: a_{j-1} - a_j has numerator e_j - 2
                // over the product of consecutive slope differences, so
                // corners strictly decrease exactly when e_j >= 3.
                let (m_prev, _) = t.pair(j - 1);
                let (m_j, _) = t.pair(j);
                let (m_next, _) = t.pair(j + 1);
                let gap = t.corner(j - 1) - t.corner(j);
                let denom = BigRational::from_integer((m_j - m_prev) * (m_next - m_j));
                prop_assert_eq!(gap * denom, BigRational::from_integer((digits[j - 1] - 2).into()));
                // Weight gaps are the corner gaps scaled by m_j.
                let wgap = t.weight(j - 1) - t.weight(j);
                let agap = t.corner(j - 1) - t.corner(j);
                prop_assert_eq!(wgap, agap * BigRational::from_integer(m_j.clone()));
                prop_assert!(t.corner(j) <= t.corner(j - 1));
                prop_assert!(t.weight(j).is_positive());
            }
            for j in 0..=depth {
                let (m_j, n_j) = t.pair(j);
                let (m_next, n_next) = t.pair(j + 1);
                let a = t.corner(j);
                let lhs_right = BigRational::from_integer(m_j.clone()) * a
                    - BigRational::from_integer(n_j.clone());
                let lhs_left = BigRational::from_integer(m_next.clone()) * a
                    - BigRational::from_integer(n_next.clone());
                prop_assert_eq!(&lhs_right, t.weight(j));
                prop_assert_eq!(&lhs_left, t.weight(j));
            }
            prop_assert!(t.alpha_lo() < t.alpha_hi());
            prop_assert!(t.alpha_hi() <= t.corner(depth));
        }

        /// digits_of_rational composed with the table recovers p/q exactly
        /// at full depth: alpha = n_{L+1} / m_{L+1}.
        #[test]
        fn rational_round_trip(q in 2u64..5000, p_raw in 1u64..5000) {
            let p = 1 + p_raw % (q - 1);
            let digits = crate::digits::digits_of_rational(p, q).unwrap();
            let depth = digits.len();
            let t = table(&digits, depth);
            let (m, n) = t.pair(depth + 1);
            prop_assert_eq!(
                BigRational::new(n.clone(), m.clone()),
                BigRational::new((p as i64).into(), (q as i64).into())
            );
        }
    }
}
