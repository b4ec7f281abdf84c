//! Exact-rational helpers: conversions between `f64` and `BigRational`,
//! "p/q" string round-tripping, and the fixed-width float formatting used by
//! every CSV/JSON emitter in the crate.
//!
//! The stock `BigRational::to_f64` divides two independently rounded floats,
//! which turns into `inf/inf = NaN` once numerator and denominator outgrow
//! `f64` range. Deep convergent tables do exactly that, so [`rat_to_f64`]
//! rescales by a power of two first and keeps roughly one ulp of accuracy at
//! any operand size.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Extra bits carried through the scaled division in [`rat_to_f64`]; anything
/// comfortably above 53 keeps the final rounding error at ~1 ulp.
const GUARD_BITS: u64 = 96;

/// Convert an exact rational to the nearest (within ~1 ulp) `f64`.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    if num.is_zero() {
        return 0.0;
    }
    debug_assert!(den.is_positive(), "BigRational keeps denominators positive");

    let nbits = num.bits() as i64;
    let dbits = den.bits() as i64;
    // |r| is within a factor of 2 of 2^(nbits - dbits).
    if nbits - dbits > 1100 {
        return if num.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if nbits - dbits < -1100 {
        return 0.0;
    }

    // q = num * 2^shift / den carries GUARD_BITS significant bits; converting
    // q to f64 is then exact to ~1 ulp and the power-of-two rescale is exact.
    let shift = (dbits - nbits) + GUARD_BITS as i64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let qf = q.to_f64().unwrap_or(f64::NAN);
    // Rescale in two steps: a single powi(-shift) can underflow to zero even
    // though qf * 2^-shift is representable (subnormal range).
    let half = shift / 2;
    qf * (2.0f64).powi(-half as i32) * (2.0f64).powi(-(shift - half) as i32)
}

/// Exact rational representation of a finite `f64`.
pub fn rat_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::Invalid(format!("{x} has no exact rational value")))
}

/// Render as `"p/q"` (or just `"p"` when the denominator is 1).
pub fn rat_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("cannot parse rational from {s:?}"));
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// Format a float with 17 significant digits, enough to round-trip any `f64`;
/// used by every emitter so reruns are byte-identical.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // Avoid "-0" noise in outputs.
        return "0".to_string();
    }
    format!("{x:.16e}")
}

/// Convenience: BigInt from i64.
pub fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

/// Convenience: exact rational p/q from machine integers.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn small_rationals_round_to_nearest() {
        assert_eq!(rat_to_f64(&ratio(1, 2)), 0.5);
        assert_eq!(rat_to_f64(&ratio(-3, 8)), -0.375);
        assert_eq!(rat_to_f64(&ratio(1, 3)), 1.0 / 3.0);
        assert_eq!(rat_to_f64(&ratio(2, 3)), 2.0 / 3.0);
        assert_eq!(rat_to_f64(&BigRational::zero()), 0.0);
    }

    #[test]
    fn huge_operands_survive_conversion() {
        // num and den individually overflow f64, their ratio is ~1.5.
        let n = BigInt::one() << 4000u32;
        let r = BigRational::new(&n * 3, &n * 2);
        assert!((rat_to_f64(&r) - 1.5).abs() < 1e-15);

        let tiny = BigRational::new(BigInt::one(), n.clone());
        assert_eq!(rat_to_f64(&tiny), 0.0);
        let giant = BigRational::new(n, BigInt::one());
        assert_eq!(rat_to_f64(&giant), f64::INFINITY);
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for &x in &[0.1, -0.7, 1.0 / 3.0, 6.02e23, -5e-300] {
            let r = rat_from_f64(x).unwrap();
            assert_eq!(rat_to_f64(&r), x);
        }
    }

    #[test]
    fn rational_strings_round_trip() {
        for s in ["3/8", "-11/4", "7", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_string(&r), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x/y").is_err());
    }

    #[test]
    fn seventeen_digit_floats_round_trip() {
        for &x in &[0.1, 2.0 / 3.0, 1e-17, 123456.789, -0.0, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, if x == 0.0 { 0.0 } else { x }, "{s}");
        }
    }
}
