//! Exact rationals measured in units of π.
//!
//! Every angle, invariant value and slack in this crate is a rational
//! multiple of π. [`RatPi`] stores only the rational coefficient, so
//! `RatPi::new(7, 10)` denotes 7π/10 and every comparison is exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Plain arbitrary-precision rational, used for LP coefficients.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("malformed rational {0:?} (expected p or p/q)")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("division by zero")]
    DivByZero,
}

/// A rational multiple of π, kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RatPi(BigRational);

impl RatPi {
    /// `numer/denom · π`. Panics on a zero denominator; use [`RatPi::checked`]
    /// for untrusted input.
    pub fn new(numer: i64, denom: i64) -> Self {
        Self::checked(numer, denom).expect("zero denominator")
    }

    pub fn checked(numer: i64, denom: i64) -> Result<Self, NumError> {
        if denom == 0 {
            return Err(NumError::ZeroDenominator(format!("{numer}/{denom}")));
        }
        Ok(RatPi(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_int(n: i64) -> Self {
        RatPi(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        RatPi(BigRational::zero())
    }

    /// π itself.
    pub fn pi() -> Self {
        RatPi(BigRational::one())
    }

    pub fn from_coeff(coeff: Rational) -> Self {
        RatPi(coeff)
    }

    /// The coefficient of π.
    pub fn coeff(&self) -> &Rational {
        &self.0
    }

    pub fn into_coeff(self) -> Rational {
        self.0
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn mul_int(&self, k: i64) -> Self {
        RatPi(&self.0 * BigRational::from_integer(k.into()))
    }

    pub fn div_int(&self, k: i64) -> Result<Self, NumError> {
        if k == 0 {
            return Err(NumError::DivByZero);
        }
        Ok(RatPi(&self.0 / BigRational::from_integer(k.into())))
    }

    pub fn half(&self) -> Self {
        RatPi(&self.0 / BigRational::from_integer(2.into()))
    }

    /// Strict membership in the open interval `(lo, hi)`.
    pub fn in_open(&self, lo: &RatPi, hi: &RatPi) -> bool {
        lo < self && self < hi
    }

    /// Membership in the closed interval `[lo, hi]`.
    pub fn in_closed(&self, lo: &RatPi, hi: &RatPi) -> bool {
        lo <= self && self <= hi
    }

    pub fn cmp_value(&self, other: &RatPi) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for RatPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for RatPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}π")
    }
}

impl FromStr for RatPi {
    type Err = NumError;

    /// Accepts `-?\d+(/\d+)?`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || NumError::Malformed(s.to_string());
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let unsigned = num.strip_prefix('-').unwrap_or(num);
        if !digits(unsigned) || den.is_some_and(|d| !digits(d)) {
            return Err(malformed());
        }
        let numer: BigInt = num.parse().map_err(|_| malformed())?;
        let denom: BigInt = match den {
            Some(d) => d.parse().map_err(|_| malformed())?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(NumError::ZeroDenominator(s.to_string()));
        }
        Ok(RatPi(BigRational::new(numer, denom)))
    }
}

impl Serialize for RatPi {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatPi {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<RatPi> for RatPi {
            type Output = RatPi;
            fn $method(self, rhs: RatPi) -> RatPi {
                RatPi(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a RatPi> for RatPi {
            type Output = RatPi;
            fn $method(self, rhs: &'a RatPi) -> RatPi {
                RatPi(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<&'a RatPi> for &RatPi {
            type Output = RatPi;
            fn $method(self, rhs: &'a RatPi) -> RatPi {
                RatPi((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<RatPi> for &RatPi {
            type Output = RatPi;
            fn $method(self, rhs: RatPi) -> RatPi {
                RatPi((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);

impl AddAssign<&RatPi> for RatPi {
    fn add_assign(&mut self, rhs: &RatPi) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&RatPi> for RatPi {
    fn sub_assign(&mut self, rhs: &RatPi) {
        self.0 -= &rhs.0;
    }
}

impl Neg for RatPi {
    type Output = RatPi;
    fn neg(self) -> RatPi {
        RatPi(-self.0)
    }
}

impl Neg for &RatPi {
    type Output = RatPi;
    fn neg(self) -> RatPi {
        RatPi(-&self.0)
    }
}

impl Sum for RatPi {
    fn sum<I: Iterator<Item = RatPi>>(iter: I) -> RatPi {
        iter.fold(RatPi::zero(), |acc, v| acc + v)
    }
}

impl<'a> Sum<&'a RatPi> for RatPi {
    fn sum<I: Iterator<Item = &'a RatPi>>(iter: I) -> RatPi {
        iter.fold(RatPi::zero(), |mut acc, v| {
            acc += v;
            acc
        })
    }
}
