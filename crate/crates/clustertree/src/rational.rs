//! Exact rational levels and heights.
//!
//! Density levels enter strict comparisons (notably the surrounded-by-lower-
//! density check), so they are kept as exact rationals end to end. Floating
//! inputs are converted to the exact rational value of their binary
//! representation; ties are then deliberate, never rounding artifacts.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for all levels and heights.
pub type Rational = BigRational;

/// Shorthand for small constant rationals, e.g. `ratio(1, 3)`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Exact conversion of a finite float to its rational value.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    if !v.is_finite() {
        return Err(Error::InvalidNumber(format!("{v}")));
    }
    Rational::from_f64(v).ok_or_else(|| Error::InvalidNumber(format!("{v}")))
}

/// Nearest-float view of a rational, for reports and JSON.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::InvalidNumber(format!("{s:?}: {e}")))
}

pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}

pub fn rational_zero() -> Rational {
    Rational::zero()
}
