//! Structural checks on the polygon descriptor and intersection data: exact
//! matrix entries, positive principal minors, unimodular adjacent labels,
//! bit-exact serialization, and sensitivity to single-digit edits.

use num_traits::Zero;

use super::{CaseReport, SuiteReport};
use crate::convergents::ConvergentTable;
use crate::digits::DigitSequence;
use crate::topology::{
    adjacent_labels_unimodular, intersection_matrix, polygon_descriptor, principal_minors,
};

pub fn suite(t: &ConvergentTable) -> SuiteReport {
    let mut cases = Vec::new();
    let inputs = format!("digits {:?}", t.digits());

    // Intersection matrix: digits on the diagonal, -1 off it, exact.
    match intersection_matrix(t, t.depth()) {
        Ok(m) => {
            let mut ok = true;
            let mut detail = String::new();
            for (i, row) in m.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let expect = if i == j {
                        t.digits()[i] as i64
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    if v != expect {
                        ok = false;
                        detail = format!("entry ({i}, {j}) = {v}, expected {expect}");
                    }
                }
            }
            if ok {
                detail = format!("{0} x {0} tridiagonal, exact", m.len());
            }
            cases.push(CaseReport::exact(
                "intersection-matrix",
                inputs.clone(),
                ok,
                &detail,
            ));
        }
        Err(e) => cases.push(CaseReport::exact(
            "intersection-matrix",
            inputs.clone(),
            false,
            &e.to_string(),
        )),
    }

    // Positive principal minors (positive definiteness, exactly).
    {
        let minors = principal_minors(t);
        let ok = minors.iter().all(|d| d > &num_bigint::BigInt::zero());
        cases.push(CaseReport::exact(
            "principal-minors-positive",
            inputs.clone(),
            ok,
            &format!("{} minors, all positive: {ok}", minors.len()),
        ));
    }

    // Adjacent edge labels form unimodular pairs.
    cases.push(CaseReport::exact(
        "adjacent-labels-unimodular",
        inputs.clone(),
        adjacent_labels_unimodular(t),
        "determinant 1 for every adjacent pair",
    ));

    // Descriptor serialization is bit-exact under a round trip.
    {
        let desc = polygon_descriptor(t);
        let json = serde_json::to_string(&desc).unwrap_or_default();
        let back: Result<crate::topology::PolygonDescriptor, _> = serde_json::from_str(&json);
        let json2 = back
            .as_ref()
            .map(|d| serde_json::to_string(d).unwrap_or_default())
            .unwrap_or_default();
        let ok = back.is_ok() && json == json2 && back.as_ref().map(|d| d == &desc).unwrap_or(false);
        cases.push(CaseReport::exact(
            "descriptor-round-trip",
            inputs.clone(),
            ok,
            if ok { "byte-identical" } else { "round trip diverged" },
        ));
    }

    // A single digit edit changes exactly the matching diagonal entry.
    {
        let mut digits = t.digits().to_vec();
        let mid = digits.len() / 2;
        digits[mid] = if digits[mid] == 9 { 3 } else { digits[mid] + 1 };
        let edited = DigitSequence::inline(digits.clone())
            .and_then(|seq| ConvergentTable::build(&seq, digits.len()));
        let ok = match edited {
            Ok(t2) => match (
                intersection_matrix(t, t.depth()),
                intersection_matrix(&t2, t2.depth()),
            ) {
                (Ok(a), Ok(bm)) => {
                    let mut diffs = Vec::new();
                    for i in 0..a.len() {
                        for j in 0..a.len() {
                            if a[i][j] != bm[i][j] {
                                diffs.push((i, j));
                            }
                        }
                    }
                    diffs == vec![(mid, mid)]
                }
                _ => false,
            },
            Err(_) => false,
        };
        cases.push(CaseReport::exact(
            "digit-edit-sensitivity",
            format!("digit {mid} edited"),
            ok,
            "exactly one diagonal entry differs",
        ));
    }

    SuiteReport::new("topology", cases)
}
