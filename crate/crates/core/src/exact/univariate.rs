use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::Scalar;
use super::rational::Rational;

/// Dense univariate polynomial, coefficients stored lowest degree first and
/// trimmed so the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Scalar> UniPoly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.times(x).plus(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).plus(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).minus(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| c.negated()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.times(&C::from_i64(k as i64)))
                .collect(),
        )
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.coeffs[dd].inverse().expect("leading coefficient not invertible");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].times(&lc_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(dc));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inverse().expect("leading coefficient not invertible")),
        }
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition (Yun): returns `(s_i, i)` with
    /// `self = lc · Π s_i^i`, each `s_i` monic, square-free and pairwise coprime.
    pub fn square_free_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0).unwrap();
        let mut c = fp.exact_div(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).unwrap();
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&a).unwrap();
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::constant(C::one());
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).unwrap().monic()
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> UniPoly<D> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl UniPoly<Rational> {
    /// Integer polynomial with the same roots: denominators cleared and
    /// content removed, leading coefficient positive.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = super::rational::lcm_denominators(self.coeffs.iter());
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let sign_fix = self.leading().is_some_and(|lc| lc.is_negative());
        ints.into_iter()
            .map(|v| {
                let v = if g.is_zero() { v } else { v / &g };
                if sign_fix {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    /// Cauchy bound: every real root has |x| < bound.
    pub fn root_bound(&self) -> Rational {
        let n = self.degree().unwrap_or(0);
        if n == 0 {
            return Rational::one();
        }
        let lc = self.coeffs[n].abs();
        let max = self.coeffs[..n]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + max / lc
    }

    pub fn sign_at(&self, x: &Rational) -> i32 {
        self.eval(x).signum()
    }

    pub fn leading_integer(&self) -> BigInt {
        self.primitive_integer().last().cloned().unwrap_or_else(BigInt::one)
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<C: Scalar + fmt::Display> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(c.iter().map(|&v| Rational::from(v)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn yun_decomposition() {
        // x (x-2)^2
        let f = p(&[0, 1]).mul(&p(&[-2, 1]).pow(2));
        let dec = f.square_free_decomposition();
        assert_eq!(dec, vec![(p(&[0, 1]), 1), (p(&[-2, 1]), 2)]);
        assert_eq!(f.square_free_part(), p(&[0, -2, 1]));
    }

    #[test]
    fn primitive_clears_denominators() {
        let f = UniPoly::new(vec![Rational::new(-1, 4), Rational::zero(), Rational::one()]);
        assert_eq!(
            f.primitive_integer(),
            vec![BigInt::from(-1), BigInt::from(0), BigInt::from(4)]
        );
    }
}
