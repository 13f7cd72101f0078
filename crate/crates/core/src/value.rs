//! Exact rational values used by the continuous solvers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always normalized.
pub type Ratio = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational `{0}` (expected `num/den` or an integer)")]
pub struct ParseRatioError(pub String);

pub fn zero() -> Ratio {
    Ratio::zero()
}

pub fn one() -> Ratio {
    Ratio::one()
}

pub fn half() -> Ratio {
    Ratio::new(BigInt::from(1), BigInt::from(2))
}

pub fn ratio(num: i64, den: i64) -> Ratio {
    Ratio::new(BigInt::from(num), BigInt::from(den))
}

/// Midpoint of two values, exact.
pub fn average(a: &Ratio, b: &Ratio) -> Ratio {
    (a + b) / BigInt::from(2)
}

/// Formats as `num/den`, including `/1` for integers.
pub fn format_ratio(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den`, a plain integer, or a finite decimal like `0.25`.
pub fn parse_ratio(s: &str) -> Result<Ratio, ParseRatioError> {
    let err = || ParseRatioError(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Ratio::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{int}{frac}");
        let n = BigInt::from_str(&digits).map_err(|_| err())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Ratio::new(n, d));
    }
    BigInt::from_str(s).map(Ratio::from_integer).map_err(|_| err())
}

/// True when the value lies in the closed unit interval.
pub fn in_unit_interval(r: &Ratio) -> bool {
    !r.is_negative() && r <= &one()
}

/// True when the reduced denominator is a power of two.
pub fn is_dyadic(r: &Ratio) -> bool {
    let d = r.denom();
    let bits = d.bits();
    bits > 0 && d == &(BigInt::one() << (bits - 1))
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
