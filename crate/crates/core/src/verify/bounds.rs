//! Quantitative inequalities: growth of the denominators, two-sided
//! sandwiches for corner gaps and weights, the square-root envelope bound,
//! and the positivity kernel's lower bound.
//!
//! Everything is evaluated in exact rational arithmetic. Inequalities that
//! reference the limit value alpha are tested against a *deeper* enclosure
//! (20 extra digits) in the direction that makes the test stronger than the
//! claim, so a pass here implies the claim.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{random_digit_corpus, CaseReport, SuiteReport};
use crate::boundary::BoundaryData;
use crate::convergents::ConvergentTable;
use crate::digits::DigitSequence;
use crate::rat::{big, rat_to_f64, ratio};

fn sq(r: &BigRational) -> BigRational {
    r * r
}

/// Keep the running minimum of a margin expressed as `bound - measured`
/// (for upper bounds) or `measured - bound` (for lower bounds).
struct MarginMin {
    worst: f64,
    failures: usize,
    total: usize,
}

impl MarginMin {
    fn new() -> Self {
        MarginMin {
            worst: f64::INFINITY,
            failures: 0,
            total: 0,
        }
    }
    /// `slack` must be > 0 (or >= 0 when `allow_equality`) for a pass.
    fn push(&mut self, slack: &BigRational, allow_equality: bool) {
        use num_traits::Zero;
        self.total += 1;
        let ok = if allow_equality {
            !slack.lt(&BigRational::zero())
        } else {
            slack.gt(&BigRational::zero())
        };
        if !ok {
            self.failures += 1;
        }
        self.worst = self.worst.min(rat_to_f64(slack));
    }
    fn into_case(self, name: &str, inputs: String, strictness: &str) -> CaseReport {
        let pass = self.failures == 0;
        CaseReport {
            name: name.to_string(),
            inputs,
            measured: format!(
                "{} instances, {} failed, worst slack {:.6e}",
                self.total, self.failures, self.worst
            ),
            bound: strictness.to_string(),
            margin: if pass { self.worst } else { -1.0 },
            pass,
        }
    }
}

/// The exact sandwich/growth checks shared by the primary suite and the
/// corpus. `deep` must describe the same digit sequence at depth `J + 20`.
fn exact_bound_cases(t: &ConvergentTable, deep: &ConvergentTable) -> Vec<CaseReport> {
    let j_max = t.depth();
    let inputs = format!("digits {:?}, J={}, deep J={}", t.digits(), j_max, deep.depth());
    let alpha_lo_deep = deep.alpha_lo();
    let alpha_hi_deep = deep.alpha_hi();
    let mut cases = Vec::new();

    // Growth m_{n+1} > phi^2 m_n, tested as the integer statement
    // (2 m_{n+1} - 3 m_n)^2 > 5 m_n^2 with a positive leading term.
    {
        let mut tally = MarginMin::new();
        for n in 1..=j_max {
            let mn = &t.pair(n).0;
            let mn1 = &t.pair(n + 1).0;
            let lead: BigInt = big(2) * mn1 - big(3) * mn;
            // Both the sign of the leading term and the squared comparison
            // must hold; each is recorded as its own exact instance.
            tally.push(&BigRational::from_integer(lead.clone()), false);
            let slack = BigRational::from_integer(&lead * &lead - big(5) * mn * mn);
            tally.push(&slack, false);
        }
        cases.push(tally.into_case("denominator-growth", inputs.clone(), "integer-exact, strict"));
    }

    // Corner-step sandwich: 1/(2 m_j^2) <= a_{j-1} - a_j < 2/m_j^2.
    // Equality on the left is attained exactly at j = 1 when e_1 = 3.
    {
        let mut lower = MarginMin::new();
        let mut upper = MarginMin::new();
        for j in 1..=j_max {
            let mj = BigRational::from_integer(t.pair(j).0.clone());
            let step = t.corner(j - 1) - t.corner(j);
            let lo = BigRational::new(big(1), big(2)) / sq(&mj);
            let hi = ratio(2, 1) / sq(&mj);
            lower.push(&(&step - &lo), j == 1);
            upper.push(&(&hi - &step), false);
        }
        cases.push(lower.into_case(
            "corner-step-lower",
            inputs.clone(),
            "strict (equality allowed at j=1)",
        ));
        cases.push(upper.into_case("corner-step-upper", inputs.clone(), "strict"));
    }

    // Corner-to-limit sandwich: 1/(2 m_{n+1}^2) < a_n - alpha < 3/m_{n+1}^2,
    // with alpha replaced by the deeper enclosure endpoint that strengthens
    // each direction.
    {
        let mut lower = MarginMin::new();
        let mut upper = MarginMin::new();
        for n in 0..=j_max {
            let m1 = BigRational::from_integer(t.pair(n + 1).0.clone());
            let lo_gap = t.corner(n) - alpha_hi_deep;
            let hi_gap = t.corner(n) - alpha_lo_deep;
            lower.push(&(&lo_gap - BigRational::new(big(1), big(2)) / sq(&m1)), false);
            upper.push(&(ratio(3, 1) / sq(&m1) - &hi_gap), false);
        }
        cases.push(lower.into_case("corner-to-limit-lower", inputs.clone(), "strict, via deep enclosure"));
        cases.push(upper.into_case("corner-to-limit-upper", inputs.clone(), "strict, via deep enclosure"));
    }

    // Weight-step sandwich: 1/(2 m_j) <= b_{j-1} - b_j < 2/m_j.
    {
        let mut lower = MarginMin::new();
        let mut upper = MarginMin::new();
        for j in 1..=j_max {
            let mj = BigRational::from_integer(t.pair(j).0.clone());
            let step = t.weight(j - 1) - t.weight(j);
            lower.push(&(&step - BigRational::new(big(1), big(2)) / &mj), j == 1);
            upper.push(&(ratio(2, 1) / &mj - &step), false);
        }
        cases.push(lower.into_case(
            "weight-step-lower",
            inputs.clone(),
            "strict (equality allowed at j=1)",
        ));
        cases.push(upper.into_case("weight-step-upper", inputs.clone(), "strict"));
    }

    // Weight sandwich: 1/(2 m_{n+1}) < b_n < 4/m_{n+1}.
    {
        let mut lower = MarginMin::new();
        let mut upper = MarginMin::new();
        for n in 0..=j_max {
            let m1 = BigRational::from_integer(t.pair(n + 1).0.clone());
            let b = t.weight(n);
            lower.push(&(b - BigRational::new(big(1), big(2)) / &m1), false);
            upper.push(&(ratio(4, 1) / &m1 - b), false);
        }
        cases.push(lower.into_case("weight-lower", inputs.clone(), "strict"));
        cases.push(upper.into_case("weight-upper", inputs.clone(), "strict"));
    }

    // Weight vs distance-to-limit: (a_n - alpha)/12 < b_n^2 < 32 (a_n - alpha).
    {
        let mut lower = MarginMin::new();
        let mut upper = MarginMin::new();
        for n in 0..=j_max {
            let b2 = sq(t.weight(n));
            let lo_gap = t.corner(n) - alpha_hi_deep;
            let hi_gap = t.corner(n) - alpha_lo_deep;
            lower.push(&(&b2 - hi_gap / ratio(12, 1)), false);
            upper.push(&(ratio(32, 1) * lo_gap - &b2), false);
        }
        cases.push(lower.into_case("weight-vs-distance-lower", inputs.clone(), "strict, via deep enclosure"));
        cases.push(upper.into_case("weight-vs-distance-upper", inputs.clone(), "strict, via deep enclosure"));
    }

    cases
}

/// Float record of the ratio window `b_n / sqrt(a_n - alpha)`, which the
/// exact sandwich pins inside `(1/(2 sqrt 3), 4 sqrt 2)`.
fn ratio_window_case(t: &ConvergentTable, deep: &ConvergentTable) -> CaseReport {
    // b_n / sqrt(a_n - alpha) must be formed from the exact rational quotient
    // b_n^2 / (a_n - alpha_endpoint): at deep n the difference a_n - alpha
    // is far below the f64 resolution of either operand, so a float
    // subtraction would cancel to zero and blow the ratio up to infinity.
    // The quotient itself is O(1). Taking alpha at each end of the deep
    // enclosure brackets the true ratio from both sides.
    let alpha_lo = deep.alpha_lo();
    let alpha_hi = deep.alpha_hi();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in 0..=t.depth() {
        let b2 = sq(t.weight(n));
        let r_lo = rat_to_f64(&(&b2 / (t.corner(n) - alpha_lo))).sqrt();
        let r_hi = rat_to_f64(&(&b2 / (t.corner(n) - alpha_hi))).sqrt();
        lo = lo.min(r_lo);
        hi = hi.max(r_hi);
    }
    let lo_bound = 0.5 / 3f64.sqrt();
    let hi_bound = 4.0 * 2f64.sqrt();
    let pass = lo > lo_bound && hi < hi_bound;
    CaseReport {
        name: "ratio-window".to_string(),
        inputs: format!("n = 0..={}, exact quotients at both J+20 enclosure ends", t.depth()),
        measured: format!("ratios in [{lo:.6}, {hi:.6}]"),
        bound: format!("({lo_bound:.6}, {hi_bound:.6})"),
        margin: (lo - lo_bound).min(hi_bound - hi),
        pass,
    }
}

/// Envelope square-root bound on 1000 exact abscissae spanning
/// `(alpha_hi_deep, 2]`: `eta(x)^2 <= 32 (x - alpha_hi_deep)`. Uses the
/// deep envelope so every sample lands on a resolved segment.
fn envelope_sqrt_cases(deep_b: &BoundaryData, all_three: bool) -> Vec<CaseReport> {
    let alpha_hi = deep_b.table().alpha_hi().clone();
    let step = (ratio(2, 1) - &alpha_hi) / ratio(1000, 1);
    let mut general = MarginMin::new();
    let mut refined = MarginMin::new();
    let mut eval_err = None;
    for i in 1..=1000i64 {
        let dx = &step * BigRational::from_integer(big(i));
        let x = &alpha_hi + &dx;
        match deep_b.envelope_exact(&x) {
            Ok(eta) => {
                let eta2 = sq(&eta);
                general.push(&(ratio(32, 1) * &dx - &eta2), true);
                if all_three {
                    refined.push(&(ratio(5, 1) * sq(&dx) - sq(&eta2)), true);
                }
            }
            Err(e) => {
                eval_err = Some(format!("x sample {i}: {e}"));
                break;
            }
        }
    }
    let mut out = Vec::new();
    if let Some(err) = eval_err {
        out.push(CaseReport::exact(
            "envelope-sqrt-bound",
            "1000 exact samples".into(),
            false,
            &err,
        ));
        return out;
    }
    out.push(general.into_case(
        "envelope-sqrt-bound",
        "1000 exact x in (alpha_hi_deep, 2]".into(),
        "eta^2 <= 32 (x - alpha_hi_deep)",
    ));
    if all_three {
        out.push(refined.into_case(
            "envelope-sqrt-refined",
            "1000 exact x in (alpha_hi_deep, 2]".into(),
            "eta^4 <= 5 (x - alpha_hi_deep)^2 (all-3 digits)",
        ));
    }
    out
}

/// All-3 closed forms: `m_j = (phi^{2j} - phi^{-2j}) / sqrt 5` to 1e-12
/// relative, and `(a_j - alpha)/b_j^2 -> 1/sqrt 5` within 1e-6 from j = 15.
fn all_three_cases(t: &ConvergentTable, deep: &ConvergentTable) -> Vec<CaseReport> {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let mut out = Vec::new();

    let mut worst_rel = 0.0f64;
    let top = (t.depth() + 1).min(30);
    for j in 1..=top {
        let m = t.pair(j).0.to_f64().unwrap_or(f64::INFINITY);
        let closed = (phi.powi(2 * j as i32) - phi.powi(-2 * (j as i32))) / 5f64.sqrt();
        worst_rel = worst_rel.max((m - closed).abs() / m);
    }
    out.push(CaseReport::le(
        "all3-denominator-closed-form",
        format!("j = 1..={top}"),
        worst_rel,
        1e-12,
    ));

    if t.depth() >= 15 {
        let inv_sqrt5 = 1.0 / 5f64.sqrt();
        let mut worst = 0.0f64;
        for j in 15..=t.depth() {
            let b2 = sq(t.weight(j));
            let lo = (t.corner(j) - deep.alpha_hi()) / &b2;
            let hi = (t.corner(j) - deep.alpha_lo()) / &b2;
            worst = worst
                .max((rat_to_f64(&lo) - inv_sqrt5).abs())
                .max((rat_to_f64(&hi) - inv_sqrt5).abs());
        }
        out.push(CaseReport::le(
            "all3-ratio-limit",
            format!("j = 15..={}, exact enclosure of (a_j - alpha)/b_j^2", t.depth()),
            worst,
            1e-6,
        ));
    }
    out
}

/// Positivity-kernel lower bound `D(ah + x, ah + x eta) >= x (1 - eta)` on
/// seeded random exact pairs with `eta < (4N)^{-2}`.
fn d_lower_bound_case(b: &BoundaryData, seed: u64, count: usize) -> CaseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_bound = b.table().bound() as i64;
    let eta_denom = 16 * n_bound * n_bound * 1001;
    let alpha_hat = b.alpha_hat().clone();
    let mut tally = MarginMin::new();
    let mut err = None;
    for _ in 0..count {
        let x = ratio(rng.random_range(2..=2000), 1000);
        let eta = ratio(rng.random_range(1..=1000), eta_denom);
        let x1 = &alpha_hat + &x;
        let x2 = &alpha_hat + &x * &eta;
        match b.d_eval_exact(&x1, &x2) {
            Ok(d) => {
                let floor = &x * (ratio(1, 1) - &eta);
                tally.push(&(d - floor), true);
            }
            Err(e) => {
                err = Some(e.to_string());
                break;
            }
        }
    }
    if let Some(e) = err {
        return CaseReport::exact(
            "positivity-kernel-lower",
            format!("{count} random pairs"),
            false,
            &e,
        );
    }
    tally.into_case(
        "positivity-kernel-lower",
        format!(
            "{count} random exact pairs, x in (0.001, 2], eta < (4N)^-2, N = {n_bound}"
        ),
        "D >= x (1 - eta)",
    )
}

/// Primary bounds suite for one sequence.
pub fn suite(t: &ConvergentTable, deep_b: &BoundaryData, seed: u64) -> SuiteReport {
    let deep = deep_b.table();
    let all_three = t.digits().iter().all(|&e| e == 3);
    let mut cases = exact_bound_cases(t, deep);
    cases.push(ratio_window_case(t, deep));
    cases.extend(envelope_sqrt_cases(deep_b, all_three));
    if all_three {
        cases.extend(all_three_cases(t, deep));
    }
    cases.push(d_lower_bound_case(deep_b, seed, 500));
    SuiteReport::new("bounds", cases)
}

/// The same exact bound checks over a seeded corpus of periodic sequences
/// (periodic so the deep reference table always has digits available).
pub fn corpus_suite(seed: u64, count: usize, max_len: usize) -> SuiteReport {
    let corpus = random_digit_corpus(seed, count, max_len);
    let cases: Vec<CaseReport> = corpus
        .par_iter()
        .enumerate()
        .map(|(idx, block)| {
            let inputs = format!("case {idx}: periodic block of {} digits", block.len());
            let run = || -> crate::error::Result<(Vec<String>, f64)> {
                let seq = DigitSequence::periodic(block.clone())?;
                let t = ConvergentTable::build(&seq, block.len())?;
                let deep = ConvergentTable::build(&seq, block.len() + 20)?;
                let mut sub = exact_bound_cases(&t, &deep);
                sub.push(ratio_window_case(&t, &deep));
                let failures = sub
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| format!("{}: {}", c.name, c.measured))
                    .collect();
                let worst = sub.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
                Ok((failures, worst))
            };
            match run() {
                Ok((f, worst)) if f.is_empty() => CaseReport {
                    name: "bounds-corpus".to_string(),
                    inputs,
                    measured: format!("all bound families hold, worst slack {worst:.3e}"),
                    bound: "exact".to_string(),
                    margin: worst,
                    pass: true,
                },
                Ok((f, worst)) => CaseReport::exact(
                    "bounds-corpus",
                    inputs,
                    false,
                    &format!("failed: {} (worst slack {worst:.3e})", f.join("; ")),
                ),
                Err(e) => CaseReport::exact("bounds-corpus", inputs, false, &e.to_string()),
            }
        })
        .collect();
    SuiteReport::new("bounds-corpus", cases)
}
