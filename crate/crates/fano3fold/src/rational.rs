//! Exact rational arithmetic.
//!
//! All certificate numerics are `BigRational`s: arbitrary-precision, always
//! in lowest terms with positive denominator, which is exactly the invariant
//! the rest of the crate relies on.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as an exact rational.
pub fn rat_i(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rat(r: &Rational) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q`.
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rational::from(n))
    }
}

/// Floor of a rational as an i64 (panics on overflow; fine at catalog scale).
pub fn floor_i64(r: &Rational) -> i64 {
    let f = r.floor();
    let n = f.numer();
    i64::try_from(n.clone()).expect("rational floor out of i64 range")
}

/// Exact sign: -1, 0, 1.
pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_parse() {
        let a = rat(6, 4);
        assert_eq!(fmt_rat(&a), "3/2");
        assert_eq!(parse_rat("3/2").unwrap(), a);
        assert_eq!(parse_rat("-10/5").unwrap(), rat_i(-2));
        assert_eq!(fmt_rat(&rat(-10, 5)), "-2");
        assert!(parse_rat("1/0").is_none());
    }
}
