//! Exact Gaussian rationals `re + im·ı` over arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseScalarError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-5.3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseScalarError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseScalarError::Malformed(text.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| ParseScalarError::Malformed(text.to_string()))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| ParseScalarError::Malformed(text.to_string()))?;
        if d.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(text.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseScalarError::Malformed(text.to_string()));
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseScalarError::Malformed(text.to_string()));
        }
        let digits = format!(
            "{}{}",
            if int_digits.is_empty() {
                "0"
            } else {
                int_digits
            },
            frac_part
        );
        let mut n =
            BigInt::from_str(&digits).map_err(|_| ParseScalarError::Malformed(text.to_string()))?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(BigRational::new(n, d));
    }
    let n = BigInt::from_str(s).map_err(|_| ParseScalarError::Malformed(text.to_string()))?;
    Ok(BigRational::from_integer(n))
}

/// Canonical `"p/q"` rendering, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rational from a pair of machine integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Floating rendering with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Exact complex number with rational real and imaginary parts.
///
/// `BigRational` keeps both parts reduced with positive denominator, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(ratio(num, den))
    }

    /// The imaginary unit ı.
    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|² = re² + im².
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            re: &self.re * q,
            im: &self.im * q,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Parses `"3/4"`, `"-5.3"`, `"2i"`, `"1/2-3/4i"` style literals.
    pub fn parse(text: &str) -> Result<Self, ParseScalarError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = s.strip_suffix(['i', 'ı']) else {
            return Ok(Self::real(parse_rational(&s)?));
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t)?,
        };
        Ok(Self {
            re: parse_rational(re_txt)?,
            im,
        })
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // magnitudes beyond f64 range
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "{}{}{}i",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<BigRational> for GaussRational {
    fn from(q: BigRational) -> Self {
        Self::real(q)
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.is_zero() || rhs.is_zero() {
            return GaussRational::zero();
        }
        match (
            self.re.is_zero(),
            self.im.is_zero(),
            rhs.re.is_zero(),
            rhs.im.is_zero(),
        ) {
            (_, true, _, true) => return GaussRational::real(&self.re * &rhs.re),
            (true, _, true, _) => return GaussRational::real(-(&self.im * &rhs.im)),
            (_, true, true, _) => {
                return GaussRational::new(BigRational::zero(), &self.re * &rhs.im)
            }
            (true, _, _, true) => {
                return GaussRational::new(BigRational::zero(), &self.im * &rhs.re)
            }
            _ => {}
        }
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, rhs: &GaussRational) -> GaussRational {
        let inv = rhs.recip().expect("division by zero GaussRational");
        self * &inv
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussRational {
            type Output = GaussRational;
            fn $m(self, rhs: GaussRational) -> GaussRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $m(self, rhs: &GaussRational) -> GaussRational {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, rhs: &GaussRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign for GaussRational {
    fn add_assign(&mut self, rhs: GaussRational) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, rhs: &GaussRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, rhs: &GaussRational) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for GaussRational {
    fn sum<I: Iterator<Item = GaussRational>>(iter: I) -> Self {
        iter.fold(GaussRational::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Wire form `{"re": "p/q", "im": "p/q"}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GaussRationalRepr {
    pub re: String,
    pub im: String,
}

impl From<&GaussRational> for GaussRationalRepr {
    fn from(z: &GaussRational) -> Self {
        Self {
            re: format_rational(&z.re),
            im: format_rational(&z.im),
        }
    }
}

impl TryFrom<&GaussRationalRepr> for GaussRational {
    type Error = ParseScalarError;
    fn try_from(r: &GaussRationalRepr) -> Result<Self, Self::Error> {
        Ok(GaussRational::new(
            parse_rational(&r.re)?,
            parse_rational(&r.im)?,
        ))
    }
}

impl Serialize for GaussRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GaussRationalRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = GaussRationalRepr::deserialize(d)?;
        GaussRational::try_from(&r).map_err(serde::de::Error::custom)
    }
}
