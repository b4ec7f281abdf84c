//! Verification suites: quantitative checks of every identity, inequality,
//! and asymptotic law the construction is supposed to satisfy, packaged as
//! machine-readable reports.
//!
//! Each suite returns a [`SuiteReport`] whose cases carry the measured
//! quantity, the bound it was held to, and the signed margin (slack). A
//! suite passes iff every case passes; nothing is clamped or rounded in the
//! pass/fail decision.

pub mod asymptotics;
pub mod bounds;
pub mod completeness;
pub mod einstein;
pub mod field_checks;
pub mod identities;
pub mod topology_checks;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryData;
use crate::convergents::ConvergentTable;
use crate::digits::DigitSequence;
use crate::error::Result;

/// One verified claim: what was measured, what it was compared against, and
/// how much slack was left.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    /// Human-readable description of the inputs the case ran on.
    pub inputs: String,
    pub measured: String,
    pub bound: String,
    /// Slack: distance from the measured value to the bound, nonnegative on
    /// pass. Exact (yes/no) cases report `0.0` on pass, `-1.0` on failure.
    pub margin: f64,
    pub pass: bool,
}

impl CaseReport {
    /// Case asserting `measured <= bound`.
    pub fn le(name: &str, inputs: String, measured: f64, bound: f64) -> Self {
        let margin = bound - measured;
        CaseReport {
            name: name.to_string(),
            inputs,
            measured: format!("{measured:.6e}"),
            bound: format!("<= {bound:.6e}"),
            margin,
            pass: measured <= bound,
        }
    }

    /// Case asserting `measured >= bound`.
    pub fn ge(name: &str, inputs: String, measured: f64, bound: f64) -> Self {
        let margin = measured - bound;
        CaseReport {
            name: name.to_string(),
            inputs,
            measured: format!("{measured:.6e}"),
            bound: format!(">= {bound:.6e}"),
            margin,
            pass: measured >= bound,
        }
    }

    /// Exact yes/no case (identities checked in integer or rational
    /// arithmetic, structural assertions, ...).
    pub fn exact(name: &str, inputs: String, ok: bool, detail: &str) -> Self {
        CaseReport {
            name: name.to_string(),
            inputs,
            measured: detail.to_string(),
            bound: "exact".to_string(),
            margin: if ok { 0.0 } else { -1.0 },
            pass: ok,
        }
    }
}

/// A named batch of cases; passes iff all cases pass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    /// Smallest case margin (0.0 for an empty suite).
    pub worst_margin: f64,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    pub fn new(suite: &str, cases: Vec<CaseReport>) -> Self {
        let pass = cases.iter().all(|c| c.pass);
        let worst_margin = cases
            .iter()
            .map(|c| c.margin)
            .fold(f64::INFINITY, f64::min)
            .min(f64::MAX);
        let worst_margin = if cases.is_empty() { 0.0 } else { worst_margin };
        SuiteReport {
            suite: suite.to_string(),
            pass,
            worst_margin,
            cases,
        }
    }

    /// One-line summary suitable for terminal output.
    pub fn summary_line(&self) -> String {
        format!(
            "{:32} {}  cases: {:3}  worst margin: {:.3e}",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.cases.len(),
            self.worst_margin
        )
    }
}

/// Deterministic corpus of random digit sequences, digits uniform in
/// `3..=9`, lengths uniform in `3..=max_len`.
pub fn random_digit_corpus(seed: u64, count: usize, max_len: usize) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.random_range(3..=max_len);
            (0..len).map(|_| rng.random_range(3u32..=9)).collect()
        })
        .collect()
}

/// Run every suite against one digit sequence.
///
/// `depth` is the truncation level J for the geometric suites; the interval
/// bounds that reference the limit value use a reference table at
/// `depth + 20`, so the sequence must have at least `depth + 20` digits
/// available (periodic sequences always do).
pub fn run_all(seq: &DigitSequence, depth: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    let table = ConvergentTable::build(seq, depth)?;
    let deep_boundary = BoundaryData::new(ConvergentTable::build(seq, depth + 20)?);
    let boundary = BoundaryData::new(ConvergentTable::build(seq, depth)?);

    let mut out = Vec::new();
    out.push(identities::suite(&table));
    out.push(identities::corpus_suite(seed, 50, 40));
    out.push(bounds::suite(&table, &deep_boundary, seed ^ 0x9e37_79b9));
    out.push(bounds::corpus_suite(seed ^ 0xdead_beef, 50, 40));
    out.push(field_checks::suite(&boundary, seed ^ 0x517c_c1b7));
    out.push(einstein::suite(&boundary, seed ^ 0x2545_f491));
    out.push(asymptotics::suite(&boundary));
    out.push(completeness::suite(&boundary));
    out.push(topology_checks::suite(&table));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dump_failures(reports: &[SuiteReport]) {
        for r in reports {
            eprintln!("{}", r.summary_line());
            for c in &r.cases {
                if !c.pass {
                    eprintln!(
                        "  FAIL {}: measured {} vs {} [{}]",
                        c.name, c.measured, c.bound, c.inputs
                    );
                }
            }
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        assert_eq!(
            random_digit_corpus(11, 5, 12),
            random_digit_corpus(11, 5, 12)
        );
        assert_ne!(
            random_digit_corpus(11, 5, 12),
            random_digit_corpus(12, 5, 12)
        );
        for seq in random_digit_corpus(3, 20, 40) {
            assert!((3..=40).contains(&seq.len()));
            assert!(seq.iter().all(|&e| (3..=9).contains(&e)));
        }
    }

    #[test]
    fn run_all_passes_on_the_golden_sequence() {
        let seq = DigitSequence::periodic(vec![3]).unwrap();
        let reports = run_all(&seq, 40, 7).unwrap();
        dump_failures(&reports);
        assert!(reports.iter().all(|r| r.pass), "some suites failed");
    }

    #[test]
    fn run_all_passes_on_a_mixed_sequence() {
        let seq = DigitSequence::periodic(vec![3, 4, 5, 3, 6]).unwrap();
        let reports = run_all(&seq, 40, 13).unwrap();
        dump_failures(&reports);
        assert!(reports.iter().all(|r| r.pass), "some suites failed");
    }
}
