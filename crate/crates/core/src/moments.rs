use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::MultiPolynomial;
use crate::weyl::WeylCombination;

/// Name of the formal symbol standing for the bare moment T_{m,n}.
pub fn moment_symbol(m: u32, n: u32) -> String {
    format!("T{m}_{n}")
}

/// Bare moments T_{m,n} of a candidate eigenstate, as polynomials in the
/// eigenvalue (and any other formal parameters).
///
/// Entries with m + n ≤ `max_order` that are not stored are zero. With
/// `even_only`, every entry with an odd index is an implicit zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    entries: BTreeMap<(u32, u32), MultiPolynomial>,
    max_order: u32,
    even_only: bool,
}

impl MomentTable {
    pub fn new(max_order: u32, even_only: bool) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), MultiPolynomial::one());
        MomentTable { entries, max_order, even_only }
    }

    /// Every moment an independent symbol (normalisation T_{0,0} = 1 kept).
    pub fn symbolic(max_order: u32) -> Self {
        let mut t = Self::new(max_order, false);
        for order in 1..=max_order {
            for m in 0..=order {
                t.set(m, order - m, MultiPolynomial::var(&moment_symbol(m, order - m)));
            }
        }
        t
    }

    pub fn set(&mut self, m: u32, n: u32, v: MultiPolynomial) {
        if v.is_zero() {
            self.entries.remove(&(m, n));
        } else {
            self.entries.insert((m, n), v);
        }
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn even_only(&self) -> bool {
        self.even_only
    }

    pub fn get(&self, m: u32, n: u32) -> Result<MultiPolynomial> {
        if m + n > self.max_order {
            return Err(Error::InsufficientOrder { needed: m + n, available: self.max_order });
        }
        if self.even_only && (m % 2 == 1 || n % 2 == 1) {
            return Ok(MultiPolynomial::zero());
        }
        Ok(self.entries.get(&(m, n)).cloned().unwrap_or_else(MultiPolynomial::zero))
    }

    /// Stored (nonzero) entries.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &MultiPolynomial)> {
        self.entries.iter()
    }

    /// Expectation value of a linear combination of Weyl monomials.
    pub fn evaluate(&self, form: &WeylCombination) -> Result<MultiPolynomial> {
        let mut acc = MultiPolynomial::zero();
        for (w, c) in form.terms() {
            let t = self.get(w.m, w.n)?;
            if !t.is_zero() {
                acc = acc + c * &t;
            }
        }
        Ok(acc)
    }

    pub fn map(&self, f: impl Fn(&MultiPolynomial) -> MultiPolynomial) -> Self {
        let mut out = MomentTable { entries: BTreeMap::new(), max_order: self.max_order, even_only: self.even_only };
        for ((m, n), v) in &self.entries {
            out.set(*m, *n, f(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_and_range() {
        let mut t = MomentTable::new(4, true);
        t.set(2, 0, MultiPolynomial::var("lambda"));
        assert!(t.get(1, 1).unwrap().is_zero());
        assert_eq!(t.get(2, 0).unwrap(), MultiPolynomial::var("lambda"));
        assert!(matches!(t.get(4, 2), Err(Error::InsufficientOrder { needed: 6, available: 4 })));
    }

    #[test]
    fn symbolic_table() {
        let t = MomentTable::symbolic(2);
        assert_eq!(t.get(1, 1).unwrap(), MultiPolynomial::var("T1_1"));
        assert!(t.get(0, 0).unwrap().is_one());
    }
}
