use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Exponent `k` with denominator `2^k`, if this value is dyadic.
    pub fn dyadic_exponent(&self) -> Option<u64> {
        let d = self.0.denom();
        if d.is_one() {
            return Some(0);
        }
        let tz = d.trailing_zeros()?;
        if (d >> tz).is_one() {
            Some(tz)
        } else {
            None
        }
    }

    pub fn is_dyadic(&self) -> bool {
        self.dyadic_exponent().is_some()
    }

    pub fn is_in_unit_interval(&self) -> bool {
        !self.is_negative() && self <= &Rational::one()
    }

    /// If this is `±2^k`, returns `k`.
    pub fn log2_exact(&self) -> Option<i64> {
        if !self.is_positive() {
            return None;
        }
        let (n, d) = (self.0.numer(), self.0.denom());
        if d.is_one() {
            let tz = n.trailing_zeros()?;
            ((n >> tz).is_one()).then_some(tz as i64)
        } else if n.is_one() {
            let tz = d.trailing_zeros()?;
            ((d >> tz).is_one()).then(|| -(tz as i64))
        } else {
            None
        }
    }

    pub fn midpoint(&self, other: &Rational) -> Rational {
        (self + other) * Rational::half()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p`, `p/q`, `p/2^k` and terminating binary fractions `.b1b2...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |message: &str| Error::Syntax {
            position: 0,
            message: format!("{message}: {s:?}"),
        };
        if let Some(bits) = s.strip_prefix('.') {
            if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad("malformed binary fraction"));
            }
            let n = BigInt::parse_bytes(bits.as_bytes(), 2)
                .ok_or_else(|| bad("malformed binary fraction"))?;
            return Ok(Rational(BigRational::new(n, BigInt::one() << bits.len())));
        }
        match s.split_once('/') {
            None => {
                let n: BigInt = s.parse().map_err(|_| bad("malformed integer"))?;
                Ok(Rational::from_integer(n))
            }
            Some((p, q)) => {
                let n: BigInt = p.trim().parse().map_err(|_| bad("malformed numerator"))?;
                let q = q.trim();
                let d: BigInt = if let Some(k) = q.strip_prefix("2^") {
                    let k: u64 = k.parse().map_err(|_| bad("malformed exponent"))?;
                    BigInt::one() << k
                } else {
                    q.parse().map_err(|_| bad("malformed denominator"))?
                };
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<Dyadic> for Rational {
    fn from(d: Dyadic) -> Self {
        Rational(BigRational::new(d.numerator, BigInt::one() << d.exponent))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// A dyadic rational `numerator / 2^exponent`, reduced so that the numerator is
/// odd unless the exponent is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u64,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, exponent: u64) -> Self {
        let mut numerator = numerator.into();
        let mut exponent = exponent;
        if numerator.is_zero() {
            return Dyadic {
                numerator,
                exponent: 0,
            };
        }
        if let Some(tz) = numerator.trailing_zeros() {
            let shift = tz.min(exponent);
            numerator >>= shift;
            exponent -= shift;
        }
        Dyadic {
            numerator,
            exponent,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Terminating binary expansion `.b1b2...bk` of a value in `[0,1)`.
    pub fn to_binary_string(&self) -> Option<String> {
        if self.numerator.sign() == Sign::Minus
            || self.numerator >= (BigInt::one() << self.exponent)
        {
            return None;
        }
        if self.exponent == 0 {
            return Some(".0".to_string());
        }
        let bits = self.numerator.to_str_radix(2);
        let pad = self.exponent as usize - bits.len();
        Some(format!(".{}{}", "0".repeat(pad), bits))
    }
}

impl TryFrom<&Rational> for Dyadic {
    type Error = Error;

    fn try_from(r: &Rational) -> Result<Self> {
        let k = r
            .dyadic_exponent()
            .ok_or_else(|| Error::NonDyadic(r.clone()))?;
        Ok(Dyadic::new(r.numer().clone(), k))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r: Rational = s.parse()?;
        Dyadic::try_from(&r)
    }
}
