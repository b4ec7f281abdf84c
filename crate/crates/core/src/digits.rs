//! Digit sequences feeding the continued-fraction recursion.
//!
//! A number alpha in (0, 1) is encoded by the minus-sign expansion
//! `alpha = 1/(e_1 - 1/(e_2 - ...))` with every digit `e_j >= 2`. The metric
//! construction needs the bounded, strictly larger digits `3 <= e_j <= N`;
//! sequences satisfying that are flagged *metric admissible*.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest digit allowed in a metric-admissible sequence.
pub const MIN_METRIC_DIGIT: u32 = 3;

/// How the digits are produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DigitSpec {
    /// A finite explicit list `e_1, ..., e_L`.
    Inline(Vec<u32>),
    /// An infinite periodic sequence repeating the given block.
    Periodic(Vec<u32>),
}

/// A validated digit sequence, the sole input of the whole pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSequence {
    spec: DigitSpec,
}

impl DigitSequence {
    /// Finite list of digits; every entry must be >= 2.
    pub fn inline(digits: Vec<u32>) -> Result<Self> {
        Self::validated(DigitSpec::Inline(digits))
    }

    /// Infinite periodic sequence; the block must be nonempty, entries >= 2.
    pub fn periodic(block: Vec<u32>) -> Result<Self> {
        Self::validated(DigitSpec::Periodic(block))
    }

    fn validated(spec: DigitSpec) -> Result<Self> {
        let block = match &spec {
            DigitSpec::Inline(v) | DigitSpec::Periodic(v) => v,
        };
        if block.is_empty() {
            return Err(Error::Invalid("digit sequence must be nonempty".into()));
        }
        for (i, &e) in block.iter().enumerate() {
            if e < 2 {
                return Err(Error::InvalidDigit {
                    index: i + 1,
                    value: e as i64,
                });
            }
        }
        Ok(Self { spec })
    }

    /// The digit `e_j` (1-based), or `None` past the end of a finite list.
    pub fn digit(&self, j: usize) -> Option<u32> {
        if j == 0 {
            return None;
        }
        match &self.spec {
            DigitSpec::Inline(v) => v.get(j - 1).copied(),
            DigitSpec::Periodic(v) => Some(v[(j - 1) % v.len()]),
        }
    }

    /// Number of digits available, `None` meaning infinitely many.
    pub fn available(&self) -> Option<usize> {
        match &self.spec {
            DigitSpec::Inline(v) => Some(v.len()),
            DigitSpec::Periodic(_) => None,
        }
    }

    /// The first `depth` digits, or an error if the list is shorter.
    pub fn take(&self, depth: usize) -> Result<Vec<u32>> {
        if let Some(avail) = self.available() {
            if depth > avail {
                return Err(Error::DepthUnavailable {
                    requested: depth,
                    available: avail,
                });
            }
        }
        Ok((1..=depth).map(|j| self.digit(j).unwrap()).collect())
    }

    /// The digit bound N (the largest digit that ever occurs).
    pub fn bound(&self) -> u32 {
        match &self.spec {
            DigitSpec::Inline(v) | DigitSpec::Periodic(v) => *v.iter().max().unwrap(),
        }
    }

    /// True when every digit satisfies `e_j >= 3`, i.e. the sequence encodes
    /// an admissible boundary datum for the metric construction.
    pub fn is_metric_admissible(&self) -> bool {
        match &self.spec {
            DigitSpec::Inline(v) | DigitSpec::Periodic(v) => {
                v.iter().all(|&e| e >= MIN_METRIC_DIGIT)
            }
        }
    }

    pub fn spec(&self) -> &DigitSpec {
        &self.spec
    }
}

/// Minus-sign digit expansion of a rational p/q in (0, 1).
///
/// Runs the exact Euclidean-style recursion `e = ceil(q/p)`, then continues
/// on `(e*p - q, p)` until the remainder vanishes. Every rational in (0, 1)
/// terminates, and back-substituting the digits reproduces p/q exactly
/// (property-tested below).
pub fn digits_of_rational(p: u64, q: u64) -> Result<Vec<u32>> {
    if p == 0 || p >= q {
        return Err(Error::Invalid(format!(
            "digits_of_rational needs 0 < p < q, got {p}/{q}"
        )));
    }
    let mut digits = Vec::new();
    let (mut p, mut q) = (p as u128, q as u128);
    while p > 0 {
        let e = q.div_ceil(p);
        digits.push(
            u32::try_from(e)
                .map_err(|_| Error::Invalid(format!("digit {e} overflows u32")))?,
        );
        let next_p = e * p - q;
        q = p;
        p = next_p;
    }
    Ok(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frozen_expansions() {
        assert_eq!(digits_of_rational(1, 2).unwrap(), vec![2]);
        assert_eq!(digits_of_rational(2, 5).unwrap(), vec![3, 2]);
        assert_eq!(digits_of_rational(5, 13).unwrap(), vec![3, 3, 2]);
        // Non-reduced inputs expand the same number.
        assert_eq!(digits_of_rational(10, 26).unwrap(), vec![3, 3, 2]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(digits_of_rational(0, 5).is_err());
        assert!(digits_of_rational(5, 5).is_err());
        assert!(digits_of_rational(7, 5).is_err());
        assert!(DigitSequence::inline(vec![]).is_err());
        assert!(DigitSequence::inline(vec![3, 1]).is_err());
        assert!(DigitSequence::periodic(vec![0]).is_err());
    }

    #[test]
    fn periodic_indexing_wraps() {
        let d = DigitSequence::periodic(vec![3, 4]).unwrap();
        assert_eq!(d.digit(1), Some(3));
        assert_eq!(d.digit(2), Some(4));
        assert_eq!(d.digit(5), Some(3));
        assert_eq!(d.available(), None);
        assert_eq!(d.bound(), 4);
        assert!(d.is_metric_admissible());
    }

    #[test]
    fn admissibility_flag() {
        assert!(!DigitSequence::inline(vec![3, 2, 3]).unwrap().is_metric_admissible());
        assert!(DigitSequence::inline(vec![3, 5, 12]).unwrap().is_metric_admissible());
    }

    #[test]
    fn take_respects_length() {
        let d = DigitSequence::inline(vec![3, 4, 3]).unwrap();
        assert_eq!(d.take(2).unwrap(), vec![3, 4]);
        assert!(d.take(4).is_err());
    }

    /// Oracle: fold the digits back through x -> 1/(e - x) and compare with
    /// p/q in exact arithmetic.
    fn back_substitute(digits: &[u32]) -> num_rational::BigRational {
        use num_rational::BigRational;
        use num_traits::Zero;
        let mut x = BigRational::zero();
        for &e in digits.iter().rev() {
            x = BigRational::new(1.into(), 1.into())
                / (BigRational::from_integer(e.into()) - x);
        }
        x
    }

    proptest! {
        #[test]
        fn expansion_back_substitutes_to_input(q in 2u64..20_000, p_raw in 1u64..20_000) {
            let p = 1 + p_raw % (q - 1); // 1 <= p < q
            let digits = digits_of_rational(p, q).unwrap();
            prop_assert!(digits.iter().all(|&e| e >= 2));
            let back = back_substitute(&digits);
            prop_assert_eq!(back, num_rational::BigRational::new((p as i64).into(), (q as i64).into()));
        }
    }
}
