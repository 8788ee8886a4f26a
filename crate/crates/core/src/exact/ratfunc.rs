use std::fmt;

use super::field::Scalar;
use super::gaussian::GaussianRational;
use super::poly::MultiPolynomial;
use super::rational::Rational;

/// Quotient of two `MultiPolynomial`s.
///
/// Univariate quotients are kept in lowest terms with a monic denominator;
/// multivariate ones are reduced only when one side divides the other.
#[derive(Clone)]
pub struct RationalFunction {
    num: MultiPolynomial,
    den: MultiPolynomial,
}

impl RationalFunction {
    pub fn from_poly(p: MultiPolynomial) -> Self {
        RationalFunction { num: p, den: MultiPolynomial::one() }
    }

    /// `None` when the denominator is zero.
    pub fn new(num: MultiPolynomial, den: MultiPolynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    pub fn numerator(&self) -> &MultiPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPolynomial {
        &self.den
    }

    pub fn as_polynomial(&self) -> Option<&MultiPolynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.as_polynomial()?.as_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    fn normalized(num: MultiPolynomial, den: MultiPolynomial) -> Self {
        if num.is_zero() {
            return Self::from_poly(MultiPolynomial::zero());
        }
        if let Some(c) = den.as_constant() {
            return Self::from_poly(num.scale(&c.inv().expect("nonzero constant")));
        }
        let var = den.sole_variable().map(str::to_string);
        if let Some(v) = var {
            if num.variables().is_empty() || num.sole_variable() == Some(v.as_str()) {
                let nu = num.to_univariate(&v).unwrap();
                let du = den.to_univariate(&v).unwrap();
                let g = nu.gcd(&du);
                let (nu, du) = if g.degree().unwrap_or(0) > 0 {
                    (nu.exact_div(&g).unwrap(), du.exact_div(&g).unwrap())
                } else {
                    (nu, du)
                };
                let lc_inv = du.leading().unwrap().inv().unwrap();
                let num = MultiPolynomial::from_univariate(&v, &nu.scale(&lc_inv));
                let den = MultiPolynomial::from_univariate(&v, &du.scale(&lc_inv));
                return RationalFunction { num, den };
            }
        }
        if let Some(q) = num.exact_div(&den) {
            return Self::from_poly(q);
        }
        if !num.is_constant() {
            if let Some(q) = den.exact_div(&num) {
                return Self::normalized(MultiPolynomial::one(), q);
            }
        }
        // cancel the common monomial factor
        let common = monomial_gcd(&num, &den);
        let (num, den) = if common.is_one() {
            (num, den)
        } else {
            (num.exact_div(&common).unwrap(), den.exact_div(&common).unwrap())
        };
        if let Some(c) = den.as_constant() {
            return Self::from_poly(num.scale(&c.inv().expect("nonzero constant")));
        }
        // fix the scale: leading coefficient of the denominator is 1
        let lc = den.terms().last().map(|(_, c)| c.clone()).unwrap();
        let inv = lc.inv().unwrap();
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    /// Substitute a value for a variable; `None` if the denominator vanishes.
    pub fn substitute(&self, name: &str, value: &GaussianRational) -> Option<Self> {
        Self::new(self.num.substitute(name, value), self.den.substitute(name, value))
    }

    pub fn substitute_rational(&self, name: &str, value: &Rational) -> Option<Self> {
        self.substitute(name, &GaussianRational::real(value.clone()))
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .num
            .variables()
            .iter()
            .chain(self.den.variables())
            .cloned()
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }
}

fn monomial_gcd(a: &MultiPolynomial, b: &MultiPolynomial) -> MultiPolynomial {
    let mut common: Option<std::collections::BTreeMap<String, u32>> = None;
    for p in [a, b] {
        let vars = p.variables();
        for (exps, _) in p.terms() {
            let here: std::collections::BTreeMap<String, u32> =
                vars.iter().cloned().zip(exps.iter().copied()).filter(|(_, e)| *e > 0).collect();
            common = Some(match common {
                None => here,
                Some(c) => c
                    .into_iter()
                    .filter_map(|(v, e)| here.get(&v).map(|h| (v, e.min(*h))))
                    .collect(),
            });
        }
    }
    let powers: Vec<(String, u32)> = common.unwrap_or_default().into_iter().collect();
    let refs: Vec<(&str, u32)> = powers.iter().map(|(v, e)| (v.as_str(), *e)).collect();
    MultiPolynomial::monomial(GaussianRational::one(), &refs)
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Scalar for RationalFunction {
    fn zero() -> Self {
        Self::from_poly(MultiPolynomial::zero())
    }
    fn one() -> Self {
        Self::from_poly(MultiPolynomial::one())
    }
    fn from_i64(v: i64) -> Self {
        Self::from_poly(MultiPolynomial::int(v))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(&self.num * &o.num);
        }
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }
    fn negated(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }
    fn conjugate(&self) -> Self {
        Self::normalized(self.num.conj(), self.den.conj())
    }
    fn from_rational(r: &Rational) -> Self {
        Self::from_poly(MultiPolynomial::rational(r.clone()))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MultiPolynomial {
        MultiPolynomial::var("x")
    }

    #[test]
    fn reduces_univariate() {
        let one = MultiPolynomial::one();
        let num = &(&x() - &one) * &(&x() + &one);
        let den = (&x() - &one).scale_rational(&Rational::from(2));
        let r = RationalFunction::new(num, den).unwrap();
        let expect = (&x() + &one).scale_rational(&Rational::new(1, 2));
        assert_eq!(r.as_polynomial(), Some(&expect));
    }

    #[test]
    fn field_operations() {
        let one = MultiPolynomial::one();
        let a = RationalFunction::new(one.clone(), &x() + &one).unwrap();
        let b = RationalFunction::new(one.clone(), &x() - &one).unwrap();
        let s = a.plus(&b);
        let expect = RationalFunction::new(x().scale_rational(&Rational::from(2)), &(&x() * &x()) - &one).unwrap();
        assert_eq!(s, expect);
        let p = s.times(&s.inverse().unwrap());
        assert_eq!(p.as_polynomial(), Some(&one));
        assert!(RationalFunction::zero().inverse().is_none());
    }

    #[test]
    fn multivariate_exact_quotient() {
        let y = MultiPolynomial::var("y");
        let num = &(&x() + &y) * &(&x() - &y);
        let r = RationalFunction::new(num, &x() + &y).unwrap();
        assert_eq!(r.as_polynomial(), Some(&(&x() - &y)));
    }
}
