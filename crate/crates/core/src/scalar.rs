//! Scalar fields the whole stack is generic over.
//!
//! Exact verification runs on [`BigRational`]; the float backends compare
//! through an explicit relative tolerance instead of `==`.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, NumAssign, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// A real scalar field usable as the coefficient type of algebra elements.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + NumAssign + Signed + Send + Sync + 'static
{
    /// True when arithmetic is exact and zero tests are decisive.
    const EXACT: bool;

    /// Short backend tag used in reports.
    const BACKEND: &'static str;

    /// `num / den` in this field. Panics on `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }

    /// Nearest representable value of a float; rationals take the exact binary value.
    fn from_f64(value: f64) -> Self;

    fn to_f64(&self) -> f64;

    /// Zero test relative to `scale` (a nonnegative magnitude of the quantity
    /// under test). Exact fields ignore `scale`.
    fn is_negligible(&self, scale: &Self) -> bool;

    /// Square root when it exists in the field. Rationals only succeed on
    /// perfect squares.
    fn sqrt_exact(&self) -> Option<Self>;

    /// JSON encoding. Rationals are `"p/q"` strings, floats are numbers.
    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self>;
}

/// Relative tolerance for the `f64` backend.
pub const F64_TOLERANCE: f64 = 1e-12;
/// Relative tolerance for the `f32` backend.
pub const F32_TOLERANCE: f32 = 1e-5;

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Ok(int) = BigInt::from_str(text) {
        return Ok(BigRational::from_integer(int));
    }
    // decimal literal such as "0.25" or "-1.5e-3" is taken at its exact decimal value
    let (mantissa, exponent) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i32>()
                .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?,
        ),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(&digits)
        .map_err(|_| Error::Parse(format!("not a rational literal: {text:?}")))?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn exact_sqrt_int(value: &BigInt) -> Option<BigInt> {
    if value.is_negative() {
        return None;
    }
    let root = value.sqrt();
    (&root * &root == *value).then_some(root)
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const BACKEND: &'static str = "rational";

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(value: f64) -> Self {
        BigRational::from_float(value).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        let num = exact_sqrt_int(self.numer())?;
        let den = exact_sqrt_int(self.denom())?;
        Some(BigRational::new(num, den))
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(text) => parse_rational(text),
            Value::Number(num) => {
                if let Some(int) = num.as_i64() {
                    Ok(BigRational::from_integer(BigInt::from(int)))
                } else {
                    parse_rational(&num.to_string())
                }
            }
            other => Err(Error::Parse(format!("expected rational, found {other}"))),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const BACKEND: &'static str = "float64";

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_f64(value: f64) -> Self {
        value
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= F64_TOLERANCE * scale.abs()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Number(num) => num
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad number {num}"))),
            Value::String(text) => Ok(Scalar::to_f64(&parse_rational(text)?)),
            other => Err(Error::Parse(format!("expected number, found {other}"))),
        }
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    const BACKEND: &'static str = "float32";

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        (num as f64 / den as f64) as f32
    }

    fn from_f64(value: f64) -> Self {
        value as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= F32_TOLERANCE * scale.abs()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(f64::from(*self))
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(value: &Value) -> Result<Self> {
        <f64 as Scalar>::from_json(value).map(|v| v as f32)
    }
}

/// `n!` as a scalar.
pub fn factorial<S: Scalar>(n: u32) -> S {
    (1..=n).fold(S::one(), |acc, m| acc * S::from_int(i64::from(m)))
}

/// Convenience for exact literals in tests and examples.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}
