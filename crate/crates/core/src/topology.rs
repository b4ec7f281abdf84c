//! Combinatorial data of the 4-manifold: the labelled boundary polygon
//! (each envelope edge carries the integer isotropy label of the torus
//! circle that collapses over it) and the intersection form of the chain of
//! 2-spheres sitting over the edges.
//!
//! Smoothness of the ambient space is the unimodularity of adjacent labels,
//! `m_j n_{j+1} - m_{j+1} n_j = 1`; the chain spheres satisfy
//! `S_j . S_j = e_j` and `S_j . S_{j+1} = -1`, giving a tridiagonal
//! intersection matrix whose diagonal is the digit sequence — a complete
//! structural invariant, which is how one-digit edits stay distinguishable.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::convergents::ConvergentTable;
use crate::error::{Error, Result};
use crate::rat::rat_string;

/// One polygon edge `[a_j, a_{j-1}]` with its isotropy label `(m_j, n_j)`.
/// Edge 0 is the unbounded side `[a_0, inf)` labelled `(0, -1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonEdge {
    /// Exact rational left endpoint.
    pub lo: String,
    /// Exact rational right endpoint; `None` on the unbounded edge.
    pub hi: Option<String>,
    /// Label `(m, n)` as decimal strings (they outgrow i64 near depth 60).
    pub label: [String; 2],
}

/// Intersection form of the sphere chain: `diag[j] = e_{j+1}`, off-diagonal
/// entries all equal `offdiag = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionData {
    pub diag: Vec<u32>,
    pub offdiag: i64,
}

/// Serializable summary of the toric combinatorics at truncation `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonDescriptor {
    pub truncation: usize,
    /// `[lo, hi]` enclosure of the boundary parameter, exact rationals.
    pub alpha_enclosure: [String; 2],
    /// Corners `a_0 ..= a_J`, exact rationals, decreasing.
    pub corners: Vec<String>,
    /// Edges `j = 0 ..= J`, unbounded edge first.
    pub edges: Vec<PolygonEdge>,
    pub intersection: IntersectionData,
    /// The matrix is emitted with positive diagonal and `-1` off-diagonal;
    /// the opposite orientation flips every sign.
    pub orientation_positive_diagonal: bool,
}

/// Build the descriptor from a convergent table (uses its full depth).
pub fn polygon_descriptor(t: &ConvergentTable) -> PolygonDescriptor {
    let j_max = t.depth();
    let corners: Vec<String> = t.corners().iter().map(rat_string).collect();
    let mut edges = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let (m, n) = t.pair(j).clone();
        edges.push(PolygonEdge {
            lo: rat_string(t.corner(j)),
            hi: if j == 0 {
                None
            } else {
                Some(rat_string(t.corner(j - 1)))
            },
            label: [m.to_string(), n.to_string()],
        });
    }
    PolygonDescriptor {
        truncation: j_max,
        alpha_enclosure: [rat_string(t.alpha_lo()), rat_string(t.alpha_hi())],
        corners,
        edges,
        intersection: IntersectionData {
            diag: t.digits().to_vec(),
            offdiag: -1,
        },
        orientation_positive_diagonal: true,
    }
}

/// Dense `k x k` intersection matrix of the first `k` chain spheres.
pub fn intersection_matrix(t: &ConvergentTable, k: usize) -> Result<Vec<Vec<i64>>> {
    if k < 1 || k > t.depth() {
        return Err(Error::Invalid(format!(
            "intersection matrix size must be in 1..={}, got {k}",
            t.depth()
        )));
    }
    let mut m = vec![vec![0i64; k]; k];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = i64::from(t.digits()[i]);
        if i + 1 < k {
            row[i + 1] = -1;
        }
        if i > 0 {
            row[i - 1] = -1;
        }
    }
    Ok(m)
}

/// Exact leading principal minors of the intersection matrix, via the
/// tridiagonal recurrence `D_k = e_k D_{k-1} - D_{k-2}`.
pub fn principal_minors(t: &ConvergentTable) -> Vec<BigInt> {
    let mut minors = Vec::with_capacity(t.depth());
    let mut prev = BigInt::one(); // D_0
    let mut prev2 = BigInt::one(); // unused until k = 2
    for (k, &e) in t.digits().iter().enumerate() {
        let d = if k == 0 {
            BigInt::from(e)
        } else {
            BigInt::from(e) * &prev - &prev2
        };
        prev2 = std::mem::replace(&mut prev, d.clone());
        minors.push(d);
    }
    minors
}

/// Exact smoothness check: every adjacent label pair is unimodular.
pub fn adjacent_labels_unimodular(t: &ConvergentTable) -> bool {
    t.pairs().windows(2).all(|pair| {
        let (m0, n0) = &pair[0];
        let (m1, n1) = &pair[1];
        (m0 * n1 - m1 * n0).abs() == BigInt::one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::DigitSequence;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn table(digits: &[u32], periodic: bool, depth: usize) -> ConvergentTable {
        let seq = if periodic {
            DigitSequence::periodic(digits.to_vec()).unwrap()
        } else {
            DigitSequence::inline(digits.to_vec()).unwrap()
        };
        ConvergentTable::build(&seq, depth).unwrap()
    }

    #[test]
    fn frozen_all3_descriptor() {
        let d = polygon_descriptor(&table(&[3], true, 3));
        assert_eq!(d.truncation, 3);
        assert_eq!(d.alpha_enclosure, ["3/8".to_string(), "5/13".to_string()]);
        assert_eq!(d.corners, ["1", "1/2", "2/5", "5/13"]);
        let got: Vec<(&str, Option<&str>, [&str; 2])> = d
            .edges
            .iter()
            .map(|e| {
                (
                    e.lo.as_str(),
                    e.hi.as_deref(),
                    [e.label[0].as_str(), e.label[1].as_str()],
                )
            })
            .collect();
        assert_eq!(
            got,
            vec![
                ("1", None, ["0", "-1"]),
                ("1/2", Some("1"), ["1", "0"]),
                ("2/5", Some("1/2"), ["3", "1"]),
                ("5/13", Some("2/5"), ["8", "3"]),
            ]
        );
        assert_eq!(d.intersection.diag, vec![3, 3, 3]);
        assert_eq!(d.intersection.offdiag, -1);
    }

    #[test]
    fn frozen_intersection_matrices() {
        let m = intersection_matrix(&table(&[3], true, 3), 3).unwrap();
        assert_eq!(m, vec![vec![3, -1, 0], vec![-1, 3, -1], vec![0, -1, 3]]);
        let m2 = intersection_matrix(&table(&[3, 5], false, 2), 2).unwrap();
        assert_eq!(m2, vec![vec![3, -1], vec![-1, 5]]);
        assert!(intersection_matrix(&table(&[3], true, 2), 5).is_err());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let d = polygon_descriptor(&table(&[3, 4, 3], false, 3));
        let s = serde_json::to_string(&d).unwrap();
        let back: PolygonDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn single_digit_edit_changes_the_diagonal() {
        let base = polygon_descriptor(&table(&[3, 3, 3, 3], false, 4));
        let edited = polygon_descriptor(&table(&[3, 3, 4, 3], false, 4));
        assert_ne!(base.intersection.diag, edited.intersection.diag);
        assert_eq!(
            base.intersection
                .diag
                .iter()
                .zip(&edited.intersection.diag)
                .filter(|(a, b)| a != b)
                .count(),
            1
        );
    }

    proptest! {
        #[test]
        fn minors_positive_and_labels_unimodular(
            digits in proptest::collection::vec(3u32..=9, 1..=40),
        ) {
            let t = table(&digits, false, digits.len());
            prop_assert!(adjacent_labels_unimodular(&t));
            let minors = principal_minors(&t);
            prop_assert_eq!(minors.len(), digits.len());
            for d in &minors {
                prop_assert!(d > &BigInt::zero());
            }
            // Determinant of the full matrix equals the last minor; cross-check
            // small cases against naive expansion via the recurrence seed.
            let m = intersection_matrix(&t, digits.len().min(3)).unwrap();
            if digits.len() >= 3 {
                let e = |i: usize| i64::from(digits[i]);
                let det3 = e(0) * (e(1) * e(2) - 1) - e(2);
                prop_assert_eq!(m[0][0] * (m[1][1] * m[2][2] - 1) - m[2][2], det3);
            }
        }
    }
}
