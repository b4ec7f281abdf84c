//! Exact integer/rational identities of the convergent data, checked with
//! zero tolerance in arbitrary precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{random_digit_corpus, CaseReport, SuiteReport};
use crate::convergents::ConvergentTable;
use crate::digits::DigitSequence;
use crate::rat::big;

/// Apply the digit matrices `M_1 ... M_{j-1}` to `(0, 1)^T`, rightmost
/// factor first, returning `(n_j, m_j)`. Independent oracle for the
/// recurrence the table uses.
fn matrix_pair(digits: &[u32], j: usize) -> (BigInt, BigInt) {
    let (mut top, mut bot) = (BigInt::zero(), BigInt::one());
    for k in (1..j).rev() {
        let e = big(digits[k - 1] as i64);
        // M_k = [[0, 1], [-1, e_k]] applied to (top, bot).
        let new_top = bot.clone();
        let new_bot = e * bot - top;
        top = new_top;
        bot = new_bot;
    }
    (top, bot)
}

struct IdentityTally {
    checked: usize,
    failures: Vec<String>,
}

impl IdentityTally {
    fn new() -> Self {
        IdentityTally {
            checked: 0,
            failures: Vec::new(),
        }
    }
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
    fn into_case(self, name: &str, inputs: String) -> CaseReport {
        let ok = self.failures.is_empty();
        let detail = if ok {
            format!("{} instances, all exact", self.checked)
        } else {
            format!(
                "{} of {} instances failed: {}",
                self.failures.len(),
                self.checked,
                self.failures.join("; ")
            )
        };
        CaseReport::exact(name, inputs, ok, &detail)
    }
}

fn ratio_of(pair: &(BigInt, BigInt)) -> BigRational {
    BigRational::new(pair.1.clone(), pair.0.clone())
}

/// Run all six identity families on one table; returns per-family tallies.
fn run_identities(t: &ConvergentTable) -> Vec<(&'static str, IdentityTally)> {
    let j_max = t.depth();
    let digits = t.digits();

    let mut adjacent = IdentityTally::new();
    for j in 0..=j_max {
        let (m0, n0) = t.pair(j);
        let (m1, n1) = t.pair(j + 1);
        adjacent.check(m0 * n1 - m1 * n0 == big(1), || format!("j={j}"));
    }

    let mut skew = IdentityTally::new();
    for j in 1..=j_max {
        let (ml, nl) = t.pair(j - 1);
        let (mr, nr) = t.pair(j + 1);
        let e = big(digits[j - 1] as i64);
        skew.check(ml * nr - mr * nl == e, || format!("j={j}"));
    }

    let mut matrices = IdentityTally::new();
    for j in 1..=j_max + 1 {
        let (n, m) = matrix_pair(digits, j);
        let (tm, tn) = t.pair(j);
        matrices.check(&n == tn && &m == tm, || format!("j={j}"));
    }

    let mut ratio_steps = IdentityTally::new();
    for j in 1..=j_max {
        let pj = t.pair(j);
        let pj1 = t.pair(j + 1);
        let lhs = ratio_of(pj1) - ratio_of(pj);
        let rhs = BigRational::new(big(1), &pj.0 * &pj1.0);
        ratio_steps.check(lhs == rhs, || format!("j={j}"));
    }

    let mut corner_gaps = IdentityTally::new();
    for j in 1..=j_max {
        let pj = t.pair(j);
        let pj1 = t.pair(j + 1);
        let lhs = t.corner(j) - ratio_of(pj);
        let rhs = BigRational::new(big(1), &pj.0 * (&pj1.0 - &pj.0));
        corner_gaps.check(lhs == rhs, || format!("j={j}"));
    }
    // The enclosure width is the deepest instance of the same identity.
    {
        let pj = t.pair(j_max);
        let pj1 = t.pair(j_max + 1);
        let rhs = BigRational::new(big(1), &pj.0 * (&pj1.0 - &pj.0));
        corner_gaps.check(t.enclosure_width() == rhs, || "width".to_string());
    }

    let mut corner_steps = IdentityTally::new();
    for j in 1..=j_max {
        let (ml, _) = t.pair(j - 1);
        let (mm, _) = t.pair(j);
        let (mr, _) = t.pair(j + 1);
        let e = digits[j - 1];
        let lhs = t.corner(j - 1) - t.corner(j);
        let rhs = BigRational::new(big(e as i64 - 2), (mr - mm) * (mm - ml));
        corner_steps.check(lhs == rhs, || format!("j={j}"));
    }

    vec![
        ("adjacent-determinant", adjacent),
        ("skew-determinant", skew),
        ("matrix-product", matrices),
        ("ratio-step", ratio_steps),
        ("corner-vs-ratio", corner_gaps),
        ("corner-step", corner_steps),
    ]
}

/// Per-identity cases on a single table.
pub fn suite(t: &ConvergentTable) -> SuiteReport {
    let inputs = format!("digits {:?}, J={}", t.digits(), t.depth());
    let cases = run_identities(t)
        .into_iter()
        .map(|(name, tally)| tally.into_case(name, inputs.clone()))
        .collect();
    SuiteReport::new("identities", cases)
}

/// The same identities over a seeded random corpus of admissible sequences;
/// one aggregated case per sequence.
pub fn corpus_suite(seed: u64, count: usize, max_len: usize) -> SuiteReport {
    let corpus = random_digit_corpus(seed, count, max_len);
    let cases: Vec<CaseReport> = corpus
        .par_iter()
        .enumerate()
        .map(|(idx, digits)| {
            let inputs = format!("case {idx}: {} digits in 3..=9", digits.len());
            let seq = match DigitSequence::inline(digits.clone()) {
                Ok(s) => s,
                Err(e) => return CaseReport::exact("identity-corpus", inputs, false, &e.to_string()),
            };
            match ConvergentTable::build(&seq, digits.len()) {
                Ok(t) => {
                    let failures: Vec<String> = run_identities(&t)
                        .into_iter()
                        .filter(|(_, tally)| !tally.failures.is_empty())
                        .map(|(name, tally)| format!("{name}: {}", tally.failures.join(",")))
                        .collect();
                    let ok = failures.is_empty();
                    let detail = if ok {
                        "all identities exact".to_string()
                    } else {
                        failures.join("; ")
                    };
                    CaseReport::exact("identity-corpus", inputs, ok, &detail)
                }
                Err(e) => CaseReport::exact("identity-corpus", inputs, false, &e.to_string()),
            }
        })
        .collect();
    SuiteReport::new("identities-corpus", cases)
}
