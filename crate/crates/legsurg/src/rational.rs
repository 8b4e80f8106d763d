//! Exact integer and rational helpers.
//!
//! Every quantity in this crate is exact: integers are [`BigInt`], rationals
//! are [`BigRational`].  Rationals cross the serialization boundary as
//! `"p/q"` strings in lowest terms with `q > 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// `n` as a big integer.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// The rational `n/d`; panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// Canonical `"p/q"` form (lowest terms, positive denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` (whitespace tolerated) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: Int = n.parse().map_err(|_| bad())?;
    let d: Int = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Converts to `i64`, failing with a computation error when out of range.
pub fn to_i64(n: &Int) -> Result<i64> {
    n.to_i64().ok_or_else(|| Error::Computation(format!("integer {n} does not fit in i64")))
}

/// If `r` is an integer, returns it.
pub fn as_integer(r: &Rational) -> Option<Int> {
    r.is_integer().then(|| r.to_integer())
}

/// Sign of a rational as `-1`, `0` or `1`.
pub fn sign(r: &Rational) -> i64 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Integer square root of a non-negative integer when it is a perfect square.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

/// Non-negative residue of `a` modulo `m` (`m > 0`); for `m == 0` returns `a` itself.
pub fn modulo(a: &Int, m: &Int) -> Int {
    if m.is_zero() {
        a.clone()
    } else {
        a.mod_floor(&m.abs())
    }
}

/// `true` if the rational is `±1/n` for a positive integer `n`; returns `(sign, n)`.
pub fn unit_fraction(r: &Rational) -> Option<(i64, u64)> {
    if r.numer().abs().is_one() {
        let n = r.denom().to_u64()?;
        Some((sign(r), n))
    } else {
        None
    }
}

/// Serde adapter serializing a [`Rational`] as a `"p/q"` string.
pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t).map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Rational::from_integer(n.into())),
        }
    }
}
