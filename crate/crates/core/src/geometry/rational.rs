//! Exact rational parsing and formatting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed rational {0:?}: expected \"p/q\" or a finite decimal")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_owned());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den: BigInt = den.trim().parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn abs(x: &Rational) -> Rational {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-2/6").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("1.").unwrap(), rat(1, 1));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", ".", "1/0", "a/b", "0.1.2", "1e-3", "sqrt(2)", "NaN"] {
            assert!(parse_rational(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn format_roundtrip() {
        for x in [rat(0, 1), rat(5, 1), rat(-3, 7), rat(22, 8)] {
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
        assert_eq!(format_rational(&rat(1, 4)), "1/4");
        assert_eq!(format_rational(&rat(-2, 1)), "-2");
    }
}
