//! Coefficient fields.
//!
//! Every algebraic container in the crate is generic over a [`Scalar`]. Two
//! fields are provided: double-precision complex numbers ([`C64`]) for norm
//! numerics and exact complex rationals ([`ExactComplex`]) for identities that
//! must hold with zero residual. The numeric mode is carried by the type, so
//! mixing modes in one product does not compile.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ExactComplex = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// A real or imaginary part as it appears in the JSON interchange format.
/// Float mode writes numbers, exact mode writes `"num/den"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberRepr {
    Float(f64),
    Text(String),
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const MODE: Mode;

    fn modulus(&self) -> f64;
    fn to_c64(&self) -> C64;
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;
    fn from_rational(value: &BigRational) -> Self;
    /// Exact for both fields: the exact field takes the binary expansion.
    fn from_f64(value: f64) -> Self;
    fn imaginary_unit() -> Self;

    /// Real and imaginary parts rendered for the canonical text form.
    fn text_parts(&self) -> (String, String);
    fn json_parts(&self) -> (NumberRepr, NumberRepr);
    fn from_json_parts(re: &NumberRepr, im: &NumberRepr) -> Result<Self>;

    fn from_i64(value: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(value)))
    }

    /// Integer power; `None` for a negative power of zero.
    fn powi(&self, exponent: i64) -> Option<Self> {
        let base = if exponent < 0 { self.inv()? } else { self.clone() };
        let mut k = exponent.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * sq.clone();
            }
            k >>= 1;
            if k > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }

    fn is_real(&self) -> bool {
        self.to_c64().im == 0.0
    }
}

impl Scalar for C64 {
    const MODE: Mode = Mode::Float;

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Complex::inv(self))
        }
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_rational(value: &BigRational) -> Self {
        C64::new(value.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_f64(value: f64) -> Self {
        C64::new(value, 0.0)
    }

    fn imaginary_unit() -> Self {
        C64::i()
    }

    fn text_parts(&self) -> (String, String) {
        (format!("{}", self.re), format!("{}", self.im))
    }

    fn json_parts(&self) -> (NumberRepr, NumberRepr) {
        (NumberRepr::Float(self.re), NumberRepr::Float(self.im))
    }

    fn from_json_parts(re: &NumberRepr, im: &NumberRepr) -> Result<Self> {
        Ok(C64::new(repr_to_f64(re)?, repr_to_f64(im)?))
    }

    fn is_real(&self) -> bool {
        self.im == 0.0
    }
}

impl Scalar for ExactComplex {
    const MODE: Mode = Mode::Exact;

    fn modulus(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::NAN);
        let im = self.im.to_f64().unwrap_or(f64::NAN);
        re.hypot(im)
    }

    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let den = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        Some(Complex::new(self.re.clone() / den.clone(), -self.im.clone() / den))
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn from_rational(value: &BigRational) -> Self {
        Complex::new(value.clone(), BigRational::zero())
    }

    fn from_f64(value: f64) -> Self {
        Complex::new(BigRational::from_float(value).unwrap_or_else(BigRational::zero), BigRational::zero())
    }

    fn imaginary_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn text_parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }

    fn json_parts(&self) -> (NumberRepr, NumberRepr) {
        (
            NumberRepr::Text(self.re.to_string()),
            NumberRepr::Text(self.im.to_string()),
        )
    }

    fn from_json_parts(re: &NumberRepr, im: &NumberRepr) -> Result<Self> {
        Ok(Complex::new(repr_to_rational(re)?, repr_to_rational(im)?))
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn repr_to_f64(repr: &NumberRepr) -> Result<f64> {
    match repr {
        NumberRepr::Float(v) => Ok(*v),
        NumberRepr::Text(s) => match s.trim().parse::<f64>() {
            Ok(v) => Ok(v),
            Err(_) => parse_rational(s)?
                .to_f64()
                .ok_or_else(|| Error::param(format!("number {s} not representable"))),
        },
    }
}

fn repr_to_rational(repr: &NumberRepr) -> Result<BigRational> {
    match repr {
        NumberRepr::Text(s) => parse_rational(s),
        NumberRepr::Float(v) if v.fract() == 0.0 && v.is_finite() => {
            Ok(BigRational::from_integer(BigInt::from(*v as i64)))
        }
        NumberRepr::Float(v) => BigRational::from_float(*v)
            .ok_or_else(|| Error::param(format!("non-finite number {v}"))),
    }
}

/// Parses `"3"`, `"-3/4"` or a plain decimal such as `"0.125"` into an exact
/// rational. Exponent notation is not accepted.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::param(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(num, den);
    Ok(if negative { -value } else { value })
}

/// `|z|²` for an exact complex number, kept exact.
pub fn exact_norm_sqr(z: &ExactComplex) -> BigRational {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}
