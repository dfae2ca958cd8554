//! Scalar arithmetic shared by the exact and floating-point code paths.
//!
//! Every computation in the crate is generic over [`Real`]. Two
//! implementations exist: `f64` and [`BigRational`]. The rational path is
//! exact and is used as the ground truth for affine systems with rational
//! parameters.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ModelError;

pub trait Real: Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// Exact conversion for rationals (binary value of the float).
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    /// Nearest value to an exact rational.
    fn from_rational(r: &BigRational) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;

    fn midpoint(&self, other: &Self) -> Self;

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.sub(other)
        } else {
            other.sub(self)
        }
    }

    /// Equality up to `tol` for floats; exact equality for rationals.
    fn close_to(&self, other: &Self, tol: f64) -> bool;

    /// Short human-readable form ("3/5" for rationals).
    fn display(&self) -> String;
}

impl Real for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn midpoint(&self, other: &Self) -> Self {
        0.5 * (self + other)
    }
    fn close_to(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() < tol
    }
    fn display(&self) -> String {
        format!("{self}")
    }
}

impl Real for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        // Ratio::to_f64 handles huge numerators and denominators.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn midpoint(&self, other: &Self) -> Self {
        (self + other) / BigInt::from(2)
    }
    fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }
    fn close_to(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn display(&self) -> String {
        format!("{self}")
    }
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.55"` or
/// `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ModelError> {
    let bad = || ModelError::BadNumber(text.to_string());
    let s = text.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}
