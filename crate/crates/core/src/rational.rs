//! Exact rationals and their textual form (`"7"`, `"-3/4"`).

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses an integer or `numerator/denominator` string. Whitespace around the
/// whole token is tolerated; a zero denominator is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = parse_int(num)?;
    let den = parse_int(den)?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

fn parse_int(text: &str) -> Result<BigInt> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {text:?}")));
    }
    BigInt::from_str(text).map_err(|e| Error::Parse(format!("{text:?}: {e}")))
}

/// Canonical text: reduced, denominator omitted when it is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with `digits` significant digits, for presentation only.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let ten = BigInt::from(10);
    let mut exponent: i64 = 0;
    let mut scaled = abs.clone();
    while scaled >= Rational::from_integer(ten.clone()) {
        scaled /= Rational::from_integer(ten.clone());
        exponent += 1;
    }
    while scaled < Rational::one() {
        scaled *= Rational::from_integer(ten.clone());
        exponent -= 1;
    }
    // scaled is in [1, 10): take digits significant digits with round-half-up.
    let shift = ten.pow(digits as u32 - 1);
    let mantissa = (scaled * Rational::from_integer(shift.clone()) + ratio(1, 2)).floor();
    let mut mantissa = mantissa.to_integer();
    if mantissa >= shift.clone() * &ten {
        mantissa /= &ten;
        exponent += 1;
    }
    let mut text = mantissa.to_string();
    // Place the decimal point `exponent` places after the first digit.
    let point = exponent + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), text)
    } else if point as usize >= text.len() {
        text.push_str(&"0".repeat(point as usize - text.len()));
        text
    } else {
        let (a, b) = text.split_at(point as usize);
        format!("{a}.{b}")
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
