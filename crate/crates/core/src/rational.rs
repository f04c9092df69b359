//! The exact coefficient field: arbitrary-precision rationals.
//!
//! `Rational` is always stored in lowest terms with a positive denominator
//! (both maintained by `num_rational::BigRational`), so equality is literal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    trimmed
        .parse::<Rational>()
        .map_err(|e| Error::InvalidInput(format!("bad rational `{trimmed}`: {e}")))
        .and_then(|r| {
            if trimmed.contains('/') && r.denom().is_zero() {
                Err(Error::InvalidInput(format!(
                    "zero denominator in `{trimmed}`"
                )))
            } else {
                Ok(r)
            }
        })
}

/// `p/q` with the `/q` dropped for integers; this is the display format
/// used throughout the file formats.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact power with a non-negative exponent.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn rat_abs(r: &Rational) -> Rational {
    r.abs()
}
