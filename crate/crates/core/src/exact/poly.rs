use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gaussian::GaussianRational;
use super::rational::Rational;
use super::univariate::UniPoly;

type Exponents = Vec<u32>;

/// Sparse polynomial over the Gaussian rationals in named variables.
///
/// Canonical form: variables sorted, every listed variable occurs in some
/// term, no zero coefficients. Derived equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, GaussianRational>,
}

impl MultiPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPolynomial { vars: Vec::new(), terms }
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(GaussianRational::real(r))
    }

    pub fn int(v: i64) -> Self {
        Self::rational(Rational::from(v))
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(GaussianRational::one(), &[(name, 1)])
    }

    /// `c · Π name^exp`.
    pub fn monomial(c: GaussianRational, powers: &[(&str, u32)]) -> Self {
        let mut acc: BTreeMap<String, u32> = BTreeMap::new();
        for (n, e) in powers {
            *acc.entry(n.to_string()).or_default() += e;
        }
        let vars: Vec<String> = acc.keys().cloned().collect();
        let exps: Exponents = acc.values().copied().collect();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self::from_parts(vars, terms)
    }

    fn from_parts(vars: Vec<String>, mut terms: BTreeMap<Exponents, GaussianRational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let used: Vec<bool> = (0..vars.len())
            .map(|i| terms.keys().any(|e| e[i] > 0))
            .collect();
        if used.iter().all(|u| *u) {
            return MultiPolynomial { vars, terms };
        }
        let vars2 = vars
            .iter()
            .zip(&used)
            .filter(|(_, u)| **u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms2 = terms
            .into_iter()
            .map(|(e, c)| {
                let e2 = e.iter().zip(&used).filter(|(_, u)| **u).map(|(x, _)| *x).collect();
                (e2, c)
            })
            .collect();
        MultiPolynomial { vars: vars2, terms: terms2 }
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &GaussianRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if !self.is_constant() {
            return None;
        }
        Some(self.constant_term())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let c = self.as_constant()?;
        c.is_real().then_some(c.re)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.vars.iter().any(|v| v == name)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    fn remap(&self, vars: &[String]) -> BTreeMap<Exponents, GaussianRational> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("variable missing from union"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; vars.len()];
                for (i, x) in e.iter().enumerate() {
                    e2[idx[i]] = *x;
                }
                (e2, c.clone())
            })
            .collect()
    }

    fn union_vars(&self, o: &Self) -> Vec<String> {
        if self.vars == o.vars {
            return self.vars.clone();
        }
        let s: BTreeSet<&String> = self.vars.iter().chain(o.vars.iter()).collect();
        s.into_iter().cloned().collect()
    }

    fn aligned(&self, o: &Self) -> (Vec<String>, BTreeMap<Exponents, GaussianRational>, BTreeMap<Exponents, GaussianRational>) {
        let vars = self.union_vars(o);
        let a = if self.vars == vars { self.terms.clone() } else { self.remap(&vars) };
        let b = if o.vars == vars { o.terms.clone() } else { o.remap(&vars) };
        (vars, a, b)
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let (vars, mut a, b) = self.aligned(o);
        for (e, c) in b {
            match a.get_mut(&e) {
                Some(x) => *x = &*x + &c,
                None => {
                    a.insert(e, c);
                }
            }
        }
        Self::from_parts(vars, a)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        MultiPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let (vars, a, b) = self.aligned(o);
        let mut out: BTreeMap<Exponents, GaussianRational> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match out.get_mut(&e) {
                    Some(x) => *x = &*x + &c,
                    None => {
                        out.insert(e, c);
                    }
                }
            }
        }
        Self::from_parts(vars, out)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussianRational::real(r.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.var_index(name) {
            None => 0,
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Coefficient of `name^power`, as a polynomial in the other variables.
    pub fn coefficient_of(&self, name: &str, power: u32) -> Self {
        let Some(i) = self.var_index(name) else {
            return if power == 0 { self.clone() } else { Self::zero() };
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] == power)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] = 0;
                (e2, c.clone())
            })
            .collect();
        Self::from_parts(self.vars.clone(), terms)
    }

    /// Drop every term whose degree in `name` exceeds `max`.
    pub fn truncate(&self, name: &str, max: u32) -> Self {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] <= max)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self::from_parts(self.vars.clone(), terms)
    }

    /// Substitute a number for a variable, eliminating it.
    pub fn substitute(&self, name: &str, value: &GaussianRational) -> Self {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        let mut powers: Vec<GaussianRational> = vec![GaussianRational::one()];
        let mut out: BTreeMap<Exponents, GaussianRational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut e2 = e.clone();
            e2[i] = 0;
            let term = c * &powers[k];
            match out.get_mut(&e2) {
                Some(x) => *x = &*x + &term,
                None => {
                    out.insert(e2, term);
                }
            }
        }
        Self::from_parts(self.vars.clone(), out)
    }

    pub fn substitute_rational(&self, name: &str, value: &Rational) -> Self {
        self.substitute(name, &GaussianRational::real(value.clone()))
    }

    /// Substitute a polynomial for a variable.
    pub fn substitute_poly(&self, name: &str, value: &MultiPolynomial) -> Self {
        let Some(i) = self.var_index(name) else {
            return self.clone();
        };
        if let Some(c) = value.as_constant() {
            return self.substitute(name, &c);
        }
        let d = self.degree_in(name);
        let mut powers = vec![Self::one()];
        for _ in 0..d {
            let next = powers.last().unwrap().mul(value);
            powers.push(next);
        }
        let mut acc = Self::zero();
        for k in 0..=d {
            let mut part: BTreeMap<Exponents, GaussianRational> = BTreeMap::new();
            for (e, c) in &self.terms {
                if e[i] == k {
                    let mut e2 = e.clone();
                    e2[i] = 0;
                    part.insert(e2, c.clone());
                }
            }
            if part.is_empty() {
                continue;
            }
            let part = Self::from_parts(self.vars.clone(), part);
            acc = acc.add(&part.mul(&powers[k as usize]));
        }
        acc
    }

    /// Evaluate with every variable bound; `None` if some variable is missing.
    pub fn eval(&self, values: &BTreeMap<String, GaussianRational>) -> Option<GaussianRational> {
        let mut p = self.clone();
        for v in self.vars.iter() {
            p = p.substitute(v, values.get(v)?);
        }
        p.as_constant()
    }

    pub fn conj(&self) -> Self {
        MultiPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Polynomial of real parts of the coefficients.
    pub fn real_part(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), GaussianRational::real(c.re.clone())))
            .collect();
        Self::from_parts(self.vars.clone(), terms)
    }

    /// Polynomial of imaginary parts of the coefficients (as reals).
    pub fn imag_part(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), GaussianRational::real(c.im.clone())))
            .collect();
        Self::from_parts(self.vars.clone(), terms)
    }

    /// View as a univariate polynomial in `name`; `None` if other variables occur.
    pub fn to_univariate(&self, name: &str) -> Option<UniPoly<GaussianRational>> {
        if self.vars.is_empty() {
            return Some(UniPoly::constant(self.constant_term()));
        }
        if self.vars.len() != 1 || self.vars[0] != name {
            return None;
        }
        let d = self.degree_in(name) as usize;
        let mut v = vec![GaussianRational::zero(); d + 1];
        for (e, c) in &self.terms {
            v[e[0] as usize] = c.clone();
        }
        Some(UniPoly::new(v))
    }

    /// Real univariate view; `None` if other variables or imaginary parts occur.
    pub fn to_real_univariate(&self, name: &str) -> Option<UniPoly<Rational>> {
        if !self.is_real() {
            return None;
        }
        self.to_univariate(name).map(|u| u.map(|c| c.re.clone()))
    }

    /// The single variable of a univariate polynomial, if there is one.
    pub fn sole_variable(&self) -> Option<&str> {
        (self.vars.len() == 1).then(|| self.vars[0].as_str())
    }

    pub fn from_univariate(name: &str, u: &UniPoly<GaussianRational>) -> Self {
        let terms = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (vec![k as u32], c.clone()))
            .collect();
        Self::from_parts(vec![name.to_string()], terms)
    }

    pub fn from_real_univariate(name: &str, u: &UniPoly<Rational>) -> Self {
        Self::from_univariate(name, &u.map(|c| GaussianRational::real(c.clone())))
    }

    /// Exact quotient `self / d` by lexicographic leading-term division;
    /// `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (vars, mut r, dd) = self.aligned(d);
        let (ed, cd) = dd.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let cd_inv = cd.inv()?;
        let mut q: BTreeMap<Exponents, GaussianRational> = BTreeMap::new();
        while let Some((er, cr)) = r.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if er.iter().zip(&ed).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Exponents = er.iter().zip(&ed).map(|(a, b)| a - b).collect();
            let t = &cr * &cd_inv;
            for (e, c) in &dd {
                let key: Exponents = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                let updated = match r.get(&key) {
                    Some(x) => x - &(&t * c),
                    None => -(&t * c),
                };
                if updated.is_zero() {
                    r.remove(&key);
                } else {
                    r.insert(key, updated);
                }
            }
            q.insert(shift, t);
        }
        Some(Self::from_parts(vars, q))
    }

    /// Map every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).collect();
        Self::from_parts(self.vars.clone(), terms)
    }

    /// Rename a variable (merging if the target already exists).
    pub fn rename(&self, from: &str, to: &str) -> Self {
        if !self.has_var(from) {
            return self.clone();
        }
        self.substitute_poly(from, &Self::var(to))
    }
}

fn fmt_coeff_term(
    f: &mut fmt::Formatter<'_>,
    c: &GaussianRational,
    mono: &str,
    first: bool,
) -> fmt::Result {
    let neg_real = c.is_real() && c.re.is_negative();
    let c_abs = if neg_real { -c } else { c.clone() };
    let sep = match (first, neg_real) {
        (true, true) => "-",
        (true, false) => "",
        (false, true) => " - ",
        (false, false) => " + ",
    };
    if mono.is_empty() {
        write!(f, "{sep}{c_abs}")
    } else if c_abs.is_one() {
        write!(f, "{sep}{mono}")
    } else {
        write!(f, "{sep}{c_abs}*{mono}")
    }
}

impl fmt::Display for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest total degree first, ties broken by the reversed lex order
        let mut ordered: Vec<(&Exponents, &GaussianRational)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (e, c) in ordered {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(x, _)| **x > 0)
                .map(|(x, v)| if *x == 1 { v.clone() } else { format!("{v}^{x}") })
                .collect();
            fmt_coeff_term(f, c, &mono.join("*"), first)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rational> for MultiPolynomial {
    fn from(r: Rational) -> Self {
        MultiPolynomial::rational(r)
    }
}

impl From<GaussianRational> for MultiPolynomial {
    fn from(c: GaussianRational) -> Self {
        MultiPolynomial::constant(c)
    }
}

macro_rules! polyop {
    ($tr:ident, $m:ident) => {
        impl<'a, 'b> $tr<&'b MultiPolynomial> for &'a MultiPolynomial {
            type Output = MultiPolynomial;
            fn $m(self, o: &'b MultiPolynomial) -> MultiPolynomial {
                MultiPolynomial::$m(self, o)
            }
        }
        impl $tr<MultiPolynomial> for MultiPolynomial {
            type Output = MultiPolynomial;
            fn $m(self, o: MultiPolynomial) -> MultiPolynomial {
                MultiPolynomial::$m(&self, &o)
            }
        }
        impl<'b> $tr<&'b MultiPolynomial> for MultiPolynomial {
            type Output = MultiPolynomial;
            fn $m(self, o: &'b MultiPolynomial) -> MultiPolynomial {
                MultiPolynomial::$m(&self, o)
            }
        }
        impl<'a> $tr<MultiPolynomial> for &'a MultiPolynomial {
            type Output = MultiPolynomial;
            fn $m(self, o: MultiPolynomial) -> MultiPolynomial {
                MultiPolynomial::$m(self, &o)
            }
        }
    };
}
polyop!(Add, add);
polyop!(Sub, sub);
polyop!(Mul, mul);

impl Neg for MultiPolynomial {
    type Output = MultiPolynomial;
    fn neg(self) -> MultiPolynomial {
        MultiPolynomial::neg(&self)
    }
}

impl<'a> Neg for &'a MultiPolynomial {
    type Output = MultiPolynomial;
    fn neg(self) -> MultiPolynomial {
        MultiPolynomial::neg(self)
    }
}
