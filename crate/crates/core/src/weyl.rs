//! Weyl-ordered monomials T_{m,n} = (q^m p^n)_Weyl, their products, and the
//! eigenstate constraints ⟨T_{m,n}(H − λ)⟩ = 0.
//!
//! Products are computed with the Moyal star product on monomial symbols:
//!
//!   f ⋆ g = Σ_k (iħ/2)^k / k! Σ_j C(k,j) (−1)^j (∂_q^{k−j} ∂_p^j f)(∂_p^{k−j} ∂_q^j g)
//!
//! so that T_{1,0} T_{0,1} = T_{1,1} + (iħ/2) T_{0,0}. ħ is kept as the
//! formal variable [`HBAR`] unless a unit-ħ variant is used.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial_int, falling, GaussianRational, MultiPolynomial, Rational};

pub const HBAR: &str = "hbar";
pub const LAMBDA: &str = "lambda";
pub const EPS: &str = "eps";

/// The Weyl-ordered monomial (q^m p^n)_Weyl.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct WeylMonomial {
    pub m: u32,
    pub n: u32,
}

impl WeylMonomial {
    pub fn new(m: u32, n: u32) -> Self {
        WeylMonomial { m, n }
    }

    pub fn order(&self) -> u32 {
        self.m + self.n
    }
}

impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{}]", self.m, self.n)
    }
}

/// Finite linear combination Σ c_{m,n} T_{m,n} with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WeylCombination {
    terms: BTreeMap<WeylMonomial, MultiPolynomial>,
}

impl WeylCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: u32, n: u32) -> Self {
        Self::term(m, n, MultiPolynomial::one())
    }

    pub fn term(m: u32, n: u32, c: MultiPolynomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(WeylMonomial::new(m, n), c);
        }
        WeylCombination { terms }
    }

    pub fn rational_term(m: u32, n: u32, c: Rational) -> Self {
        Self::term(m, n, MultiPolynomial::rational(c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &MultiPolynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: u32, n: u32) -> MultiPolynomial {
        self.terms
            .get(&WeylMonomial::new(m, n))
            .cloned()
            .unwrap_or_else(MultiPolynomial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|w| w.order()).max().unwrap_or(0)
    }

    fn add_term(&mut self, w: WeylMonomial, c: MultiPolynomial) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&w) {
            Some(x) => x + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&MultiPolynomial::int(-1)))
    }

    pub fn scale(&self, c: &MultiPolynomial) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(*w, x * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&MultiPolynomial) -> MultiPolynomial) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(*w, f(x));
        }
        out
    }

    pub fn substitute(&self, var: &str, value: &Rational) -> Self {
        self.map_coeffs(|c| c.substitute_rational(var, value))
    }

    /// Operator adjoint: every T_{m,n} is Hermitian, so only coefficients conjugate.
    pub fn adjoint(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    pub fn real_part(&self) -> Self {
        self.map_coeffs(|c| c.real_part())
    }

    pub fn imag_part(&self) -> Self {
        self.map_coeffs(|c| c.imag_part())
    }

    /// Real Weyl symbol (all coefficients real).
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }
}

impl fmt::Display for WeylCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(w, c)| format!("({c})*{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for WeylCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coefficients c_k (without the ħ^k factor) of the star product of two
/// monomials: T_a ⋆ T_b = Σ_k c_k ħ^k T_{m_a+m_b−k, n_a+n_b−k}.
pub fn monomial_product_coefficients(a: WeylMonomial, b: WeylMonomial) -> Vec<(u32, GaussianRational)> {
    let kmax = a.m.min(b.n) + a.n.min(b.m);
    let mut out = Vec::new();
    for k in 0..=kmax {
        let mut s = num_bigint::BigInt::from(0);
        for j in 0..=k {
            let t = binomial(k, j)
                * falling(a.m, k - j)
                * falling(a.n, j)
                * falling(b.n, k - j)
                * falling(b.m, j);
            if j % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        if s == num_bigint::BigInt::from(0) {
            continue;
        }
        // (i/2)^k / k!
        let scale = Rational::new(s, factorial_int(k) * num_bigint::BigInt::from(2).pow(k));
        out.push((k, GaussianRational::i_pow(k).scale(&scale)));
    }
    out
}

fn star(a: &WeylCombination, b: &WeylCombination, formal_hbar: bool) -> WeylCombination {
    let hbar = MultiPolynomial::var(HBAR);
    let mut out = WeylCombination::zero();
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let cab = ca * cb;
            for (k, c) in monomial_product_coefficients(*wa, *wb) {
                let w = WeylMonomial::new(wa.m + wb.m - k, wa.n + wb.n - k);
                let mut coeff = cab.scale(&c);
                if formal_hbar && k > 0 {
                    coeff = &coeff * &hbar.pow(k);
                }
                out.add_term(w, coeff);
            }
        }
    }
    out
}

/// Operator product in the Weyl basis, ħ kept as the formal variable [`HBAR`].
pub fn weyl_product(a: &WeylCombination, b: &WeylCombination) -> WeylCombination {
    star(a, b, true)
}

/// Operator product with ħ = 1.
pub fn weyl_product_unit(a: &WeylCombination, b: &WeylCombination) -> WeylCombination {
    star(a, b, false)
}

/// One eigenstate condition ⟨T_{m,n}(H − λ)⟩ = 0 split into its real and
/// imaginary parts, each a linear form in the bare moments.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRelation {
    pub source: WeylMonomial,
    pub real: WeylCombination,
    pub imag: WeylCombination,
}

/// Eigenstate constraints ⟨T_{m,n}(H − λ)⟩ = 0 for all m + n ≤ `max_order`.
/// ħ stays formal; `lambda` names the eigenvalue variable.
pub fn constraint_system(h: &WeylCombination, lambda: &str, max_order: u32) -> Result<Vec<ConstraintRelation>> {
    if !h.is_hermitian() {
        return Err(Error::InvalidInput(format!("Hamiltonian {h} has a non-real Weyl symbol")));
    }
    let shifted = h.sub(&WeylCombination::term(0, 0, MultiPolynomial::var(lambda)));
    let mut out = Vec::new();
    for order in 0..=max_order {
        for m in (0..=order).rev() {
            let n = order - m;
            let prod = weyl_product(&WeylCombination::monomial(m, n), &shifted);
            out.push(ConstraintRelation {
                source: WeylMonomial::new(m, n),
                real: prod.real_part(),
                imag: prod.imag_part(),
            });
        }
    }
    Ok(out)
}

/// H = (p² + q²)/2.
pub fn harmonic_hamiltonian() -> WeylCombination {
    let half = Rational::half();
    WeylCombination::rational_term(2, 0, half.clone()).add(&WeylCombination::rational_term(0, 2, half))
}

/// H = (p² + q²)/2 + ε q⁴ with ε the formal variable [`EPS`].
pub fn anharmonic_hamiltonian() -> WeylCombination {
    harmonic_hamiltonian().add(&WeylCombination::term(4, 0, MultiPolynomial::var(EPS)))
}

/// Parse a polynomial Hamiltonian written as a sum of terms `c*q^m*p^n`,
/// e.g. `1/2*p^2 + 1/2*q^2 + 0.1*q^4`. Each term maps to c·T_{m,n}. Factors
/// may appear in any order and repeat; whitespace is ignored.
pub fn parse_hamiltonian(src: &str) -> Result<WeylCombination> {
    let s: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |msg: &str| Error::InvalidInput(format!("hamiltonian `{src}`: {msg}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let mut out = WeylCombination::zero();
    let mut i = 0;
    while i < s.len() {
        let mut sign = Rational::one();
        while i < s.len() && (s[i] == '+' || s[i] == '-') {
            if s[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let mut coeff = sign;
        let (mut m, mut n) = (0u32, 0u32);
        let mut first = true;
        loop {
            if !first {
                if i < s.len() && s[i] == '*' {
                    i += 1;
                } else {
                    break;
                }
            }
            first = false;
            match s.get(i) {
                Some('q') | Some('p') => {
                    let which = s[i];
                    i += 1;
                    let mut e = 1u32;
                    if s.get(i) == Some(&'^') {
                        i += 1;
                        let start = i;
                        while i < s.len() && s[i].is_ascii_digit() {
                            i += 1;
                        }
                        let digits: String = s[start..i].iter().collect();
                        e = digits.parse().map_err(|_| bad("expected an integer exponent after '^'"))?;
                    }
                    if which == 'q' {
                        m += e;
                    } else {
                        n += e;
                    }
                }
                Some(c) if c.is_ascii_digit() || *c == '.' => {
                    let start = i;
                    while i < s.len() && (s[i].is_ascii_digit() || s[i] == '.' || s[i] == '/') {
                        i += 1;
                    }
                    let text: String = s[start..i].iter().collect();
                    let v: Rational = text.parse().map_err(|_| bad(&format!("bad coefficient `{text}`")))?;
                    coeff = coeff * v;
                }
                Some(c) => return Err(bad(&format!("unexpected `{c}`"))),
                None => return Err(bad("unexpected end of input")),
            }
        }
        if i < s.len() && s[i] != '+' && s[i] != '-' {
            return Err(bad(&format!("unexpected `{}`", s[i])));
        }
        out = out.add(&WeylCombination::rational_term(m, n, coeff));
    }
    Ok(out)
}
