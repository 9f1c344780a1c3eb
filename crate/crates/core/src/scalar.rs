//! Numeric backends: exact rationals and `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Field operations shared by the exact and floating backends.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Absolute value as `f64`, used for error bookkeeping.
    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }
    fn is_exact() -> bool;

    fn pow_u(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
    fn is_exact() -> bool {
        false
    }
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Converts a rational to the nearest `f64`, also for huge numerators and denominators.
pub fn ratio_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // scale both by a power of two so they fit
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as u64;
    let shift_d = (db - 900).max(0) as u64;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Exact rational from an `f64` (binary expansion, no rounding).
pub fn f64_to_ratio(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Parse(format!("not a finite number: {v}")))
}

/// Parses `"p/q"`, `"p"`, or a decimal literal like `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(i));
    }
    // decimal literal: read digits exactly rather than through f64
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body
        .split_once('.')
        .ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))?;
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a rational: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).unwrap();
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = Rational::new(num, den);
    Ok(if neg { -q } else { q })
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn huge_ratio_converts() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let q = Rational::new(big.clone() * BigInt::from(3), big);
        assert!((ratio_to_f64(&q) - 3.0).abs() < 1e-12);
        assert_eq!(format_rational(&rat(6, 4)), "3/2");
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(rat(-2, 3).pow_u(5), rat(-32, 243));
        assert_eq!(Scalar::pow_u(&2.0f64, 0), 1.0);
    }
}
