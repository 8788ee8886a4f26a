use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
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

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), e as usize))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        // Direct division loses range for huge numerators; scale first.
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => self.0.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    /// Value as `i64` pair, if both parts fit.
    pub fn to_i64_pair(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }

    /// The rational of smallest denominator strictly between `lo` and `hi`
    /// (Stern–Brocot descent). Requires `lo < hi`.
    pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
        assert!(lo < hi, "empty interval");
        if lo.is_negative() && hi.is_positive() {
            return Rational::zero();
        }
        if !lo.is_positive() && !hi.is_positive() {
            return -Rational::simplest_between(&-hi, &-lo);
        }
        simplest_open(lo, hi)
    }
}

// lo >= 0, lo < hi
fn simplest_open(lo: &Rational, hi: &Rational) -> Rational {
    let fl = lo.floor();
    let candidate = Rational::from_integer(fl.clone() + 1);
    if &candidate < hi {
        return candidate;
    }
    let fl_r = Rational::from_integer(fl.clone());
    if lo == &fl_r {
        // lo integer and hi <= lo + 1: recurse on reciprocal of the fractional part
        let inner = simplest_open_from_zero(&(hi - &fl_r));
        return fl_r + inner;
    }
    // both in (fl, fl+1]
    let a = (lo - &fl_r).recip().unwrap();
    let b = (hi - &fl_r).recip().unwrap();
    let inner = simplest_open(&b, &a);
    fl_r + inner.recip().unwrap()
}

// simplest rational in (0, h), h <= 1
fn simplest_open_from_zero(h: &Rational) -> Rational {
    // smallest n with 1/n < h
    let inv = h.recip().unwrap();
    let n = inv.floor() + 1;
    Rational::new(1, n)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
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

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p`, `p/q` and finite decimals such as `-0.125`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Rational::new(n, d));
        }
        if let Some((ip, fp)) = t.split_once('.') {
            let neg = ip.trim_start().starts_with('-');
            let ip = ip.trim_start_matches(['-', '+']);
            if !fp.chars().all(|c| c.is_ascii_digit()) || (ip.is_empty() && fp.is_empty()) {
                return Err(err());
            }
            let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
            let n: BigInt = digits.parse().map_err(|_| err())?;
            let d = num_traits::pow(BigInt::from(10), fp.len());
            let r = Rational::new(n, d);
            return Ok(if neg { -r } else { r });
        }
        let n: BigInt = t.parse().map_err(|_| err())?;
        Ok(Rational::from_integer(n))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(v: $t) -> Self { Rational::from_integer(v) }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, BigInt);

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// n! as a rational.
pub fn factorial(n: u32) -> Rational {
    Rational::from_integer(factorial_int(n))
}

pub fn factorial_int(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Binomial coefficient C(n, k).
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial n (n-1) ... (n-k+1); zero when k > n.
pub fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// Least common multiple of the denominators, for clearing fractions.
pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn normalizes() {
        let x = r(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(r(4, 2).to_string(), "2");
    }

    #[test]
    fn parses() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), r(3, 4));
        assert_eq!("-0.125".parse::<Rational>().unwrap(), r(-1, 8));
        assert_eq!(" 7 ".parse::<Rational>().unwrap(), r(7, 1));
        assert_eq!(".5".parse::<Rational>().unwrap(), r(1, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_round_trip() {
        let v = vec![r(1, 2), r(-7, 3), r(5, 1)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["1/2","-7/3","5"]"#);
        let back: Vec<Rational> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn simplest_between_examples() {
        assert_eq!(Rational::simplest_between(&r(1, 3), &r(2, 3)), r(1, 2));
        assert_eq!(Rational::simplest_between(&r(-1, 3), &r(2, 3)), r(0, 1));
        assert_eq!(Rational::simplest_between(&r(3, 1), &r(7, 2)), r(10, 3));
        assert_eq!(Rational::simplest_between(&r(-22, 7), &r(-3, 1)), r(-25, 8));
        assert_eq!(Rational::simplest_between(&r(5, 2), &r(11, 4)), r(8, 3));
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial(5), r(120, 1));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(falling(5, 2), BigInt::from(20));
        assert_eq!(falling(2, 3), BigInt::from(0));
    }
}
