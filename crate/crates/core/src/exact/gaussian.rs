use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::rational::Rational;

/// Exact complex number `re + i·im` with rational parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().recip()?;
        Some(GaussianRational { re: &self.re * &n, im: -(&self.im * &n) })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }

    /// i^k.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        GaussianRational::real(Rational::from(v))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}i", self.im)
                }
            }
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {}i)", self.re, -&self.im)
                } else {
                    write!(f, "({} + {}i)", self.re, self.im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a, 'b> Add<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &'b GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a, 'b> Sub<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &'b GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &'b GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &'b GaussianRational) -> GaussianRational {
        self * &o.inv().expect("division by zero")
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &'a GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);
owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re, im: -self.im }
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(a.into(), b.into())
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&g(1, 2) * &g(3, -1), g(5, 5));
        assert_eq!(&g(5, 5) / &g(3, -1), g(1, 2));
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), g(-1, 0));
        assert_eq!(g(2, 3).conj(), g(2, -3));
        assert!(g(0, 0).inv().is_none());
        assert_eq!(GaussianRational::i_pow(3), g(0, -1));
    }

    #[test]
    fn display() {
        assert_eq!(g(0, 1).to_string(), "i");
        assert_eq!(g(1, -2).to_string(), "(1 - 2i)");
        assert_eq!(GaussianRational::new(Rational::zero(), Rational::new(1, 2)).to_string(), "1/2i");
    }
}
