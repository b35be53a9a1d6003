//! Exact rational arithmetic helpers.
//!
//! Every measure, integral and threshold in the crate is a [`Rational`];
//! nothing is ever rounded.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` as a rational. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^k` for any integer exponent.
pub fn pow2(k: i64) -> Rational {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact rational: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

/// Parse `p/q` or an integer. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let t = s.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(err("inexact decimal literal; write it as p/q"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |x: &str, signed: bool| -> Result<BigInt, ParseRationalError> {
        let digits = if signed {
            x.strip_prefix(['-', '+']).unwrap_or(x)
        } else {
            x
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected an integer or p/q"));
        }
        BigInt::from_str(x).map_err(|_| err("expected an integer or p/q"))
    };
    let n = parse_int(num, true)?;
    let d = match den {
        Some(d) => parse_int(d, false)?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// A non-negative rational or `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    Finite(Rational),
    PosInfinity,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(r) => Some(r),
            Extended::PosInfinity => None,
        }
    }
}

impl From<Rational> for Extended {
    fn from(r: Rational) -> Self {
        Extended::Finite(r)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(r) => write!(f, "{r}"),
            Extended::PosInfinity => f.write_str("inf"),
        }
    }
}
