//! Exact rational helpers shared by every module.
//!
//! All quantities in the toolkit are [`Rational`]s kept in reduced form; the
//! textual form is `p/q` or a bare integer, optionally signed.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

pub type Rational = BigRational;

/// Error produced when a token is not a plain rational literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSyntaxError {
    /// Byte offset of the offending character within the token.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for RationalSyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn digits(s: &str, start: usize) -> Result<BigInt, RationalSyntaxError> {
    if s.is_empty() {
        return Err(RationalSyntaxError {
            offset: start,
            message: "expected digits".into(),
        });
    }
    if let Some(pos) = s.find(|ch: char| !ch.is_ascii_digit()) {
        return Err(RationalSyntaxError {
            offset: start + pos,
            message: format!(
                "unexpected character '{}' in rational (only p/q or integers are accepted)",
                s[pos..].chars().next().unwrap()
            ),
        });
    }
    Ok(s.parse::<BigInt>().expect("ascii digits"))
}

/// Parses `[+-]digits[/digits]`. Decimal points and exponents are rejected.
pub fn parse_rational(token: &str) -> Result<Rational, RationalSyntaxError> {
    let (negative, body, offset) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..], 1),
        Some(b'+') => (false, &token[1..], 1),
        _ => (false, token, 0),
    };
    let value = match body.split_once('/') {
        Some((num, den)) => {
            let numer = digits(num, offset)?;
            let denom = digits(den, offset + num.len() + 1)?;
            if denom.is_zero() {
                return Err(RationalSyntaxError {
                    offset: offset + num.len() + 1,
                    message: "zero denominator".into(),
                });
            }
            Rational::new(numer, denom)
        }
        None => Rational::from_integer(digits(body, offset)?),
    };
    Ok(if negative { -value } else { value })
}

/// Canonical text form: `p/q` in lowest terms, or `p` when `q = 1`.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub(crate) fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}
