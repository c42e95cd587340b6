//! Exact rational helpers: parsing, formatting and small vector utilities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(value: i64) -> Q {
    Q::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

fn parse_integer(text: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    text.parse::<BigInt>()
        .map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

/// Parses `a/b`, an integer, or a terminating decimal such as `0.125`.
pub fn parse_rational(text: &str) -> Result<Q, ParseRationalError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let num = parse_integer(num.trim(), trimmed)?;
        let den = parse_integer(den.trim(), trimmed)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(trimmed.to_string()));
        }
        return Ok(Q::new(num, den));
    }
    if let Some((whole, frac)) = trimmed.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.strip_prefix('-').unwrap_or(whole);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(trimmed.to_string()));
        }
        let whole_value = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_integer(whole_digits, trimmed)?
        };
        let frac_value = parse_integer(frac, trimmed)?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Q::new(whole_value * &scale + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    Ok(Q::from_integer(parse_integer(trimmed, trimmed)?))
}

/// Formats as `a/b` in lowest terms, always with an explicit denominator.
pub fn format_rational(value: &Q) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Q) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(lhs: &[Q], rhs: &[Q]) -> Q {
    lhs.iter().zip(rhs).fold(Q::zero(), |acc, (a, b)| acc + a * b)
}

/// Scales a rational vector to the primitive integer vector with the same direction.
pub fn primitive(vector: &[Q]) -> Vec<BigInt> {
    let lcm = vector
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = vector
        .iter()
        .map(|v| (v * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &gcd).collect()
}

pub fn primitive_q(vector: &[Q]) -> Vec<Q> {
    primitive(vector).into_iter().map(Q::from_integer).collect()
}

pub fn is_nonnegative(vector: &[Q]) -> bool {
    vector.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1").unwrap(), int(1));
        assert_eq!(parse_rational("-0.25").unwrap(), ratio(-1, 4));
    }

    #[test]
    fn rejects_non_terminating_or_scientific_forms() {
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.3.3").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&int(0)), "0/1");
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![ratio(1, 2), ratio(-3, 4)];
        assert_eq!(primitive(&v), vec![BigInt::from(2), BigInt::from(-3)]);
    }
}
