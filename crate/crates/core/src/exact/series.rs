use std::fmt;

use super::field::Scalar;

/// Precision used for exactly known series.
pub const EXACT: i64 = i64::MAX / 4;

/// Truncated Laurent series `Σ_{k ≥ val} c_k t^k + O(t^prec)`.
///
/// `coeffs[i]` is the coefficient of `t^(val + i)`; only powers below `prec`
/// are known. A series with no known nonzero coefficient is stored with
/// empty `coeffs` and `val == prec`.
#[derive(Clone, PartialEq)]
pub struct LaurentSeries<F> {
    val: i64,
    coeffs: Vec<F>,
    prec: i64,
}

impl<F: Scalar> LaurentSeries<F> {
    /// Series from coefficients of `t^val, t^(val+1), …`, known up to `t^prec` (exclusive).
    pub fn new(val: i64, coeffs: Vec<F>, prec: i64) -> Self {
        let mut s = LaurentSeries { val, coeffs, prec };
        s.normalize();
        s
    }

    pub fn constant(c: F, prec: i64) -> Self {
        Self::new(0, vec![c], prec)
    }

    pub fn zero(prec: i64) -> Self {
        Self::new(prec, Vec::new(), prec)
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.val).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.val = self.prec;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// No nonzero coefficient is known (the series is O(t^prec)).
    pub fn is_unknown_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`; `None` if `k ≥ prec`.
    pub fn coeff(&self, k: i64) -> Option<F> {
        if k >= self.prec {
            return None;
        }
        if k < self.val {
            return Some(F::zero());
        }
        Some(self.coeffs.get((k - self.val) as usize).cloned().unwrap_or_else(F::zero))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> LaurentSeries<G> {
        LaurentSeries::new(self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        Self::new(self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    fn add_impl(&self, o: &Self, sign: bool) -> Self {
        let prec = self.prec.min(o.prec);
        // empty operands do not pull the valuation down
        let val = match (self.coeffs.is_empty(), o.coeffs.is_empty()) {
            (true, true) => return Self::zero(prec),
            (false, true) => self.val,
            (true, false) => o.val,
            (false, false) => self.val.min(o.val),
        };
        if val >= prec {
            return Self::zero(prec);
        }
        let end = |s: &Self| if s.coeffs.is_empty() { val } else { s.val + s.coeffs.len() as i64 };
        let len = (prec - val).min(end(self).max(end(o)) - val) as usize;
        let mut out = vec![F::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (self.val - val) as usize + i;
            if k < len {
                out[k] = out[k].plus(c);
            }
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            let k = (o.val - val) as usize + i;
            if k < len {
                out[k] = if sign { out[k].plus(c) } else { out[k].minus(c) };
            }
        }
        Self::new(val, out, prec)
    }
}

impl<F: Scalar> Scalar for LaurentSeries<F> {
    fn zero() -> Self {
        Self::zero(EXACT)
    }
    fn one() -> Self {
        Self::constant(F::one(), EXACT)
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(F::from_i64(v), EXACT)
    }
    /// Exactly zero; an `O(t^prec)` remainder is not.
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec >= EXACT
    }
    fn plus(&self, o: &Self) -> Self {
        self.add_impl(o, true)
    }
    fn minus(&self, o: &Self) -> Self {
        self.add_impl(o, false)
    }
    fn times(&self, o: &Self) -> Self {
        // relative precisions of the factors bound that of the product
        let prec = (self.prec.saturating_add(o.val))
            .min(o.prec.saturating_add(self.val))
            .min(EXACT);
        let val = self.val.saturating_add(o.val);
        if self.coeffs.is_empty() || o.coeffs.is_empty() || val >= prec {
            return Self::zero(prec);
        }
        let len = (prec - val) as usize;
        let mut out = vec![F::zero(); len.min(self.coeffs.len() + o.coeffs.len() - 1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= out.len() || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= out.len() {
                    break;
                }
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(val, out, prec)
    }
    fn negated(&self) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.negated()).collect(),
            prec: self.prec,
        }
    }
    fn inverse(&self) -> Option<Self> {
        let c0_inv = self.coeffs.first()?.inverse()?;
        if self.prec >= EXACT {
            // only monomials have finite exact inverses
            return (self.coeffs.len() == 1).then(|| Self::new(-self.val, vec![c0_inv], EXACT));
        }
        let rel = self.prec - self.val;
        let mut b: Vec<F> = Vec::with_capacity(rel as usize);
        b.push(c0_inv.clone());
        for k in 1..rel as usize {
            let mut acc = F::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc.plus(&self.coeffs[i].times(&b[k - i]));
            }
            b.push(acc.times(&c0_inv).negated());
        }
        Some(Self::new(-self.val, b, rel - self.val))
    }
    fn conjugate(&self) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.conjugate()).collect(),
            prec: self.prec,
        }
    }
    fn from_rational(r: &super::rational::Rational) -> Self {
        Self::constant(F::from_rational(r), EXACT)
    }
}

impl<F: Scalar + fmt::Display> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(f, "({c})*t^{} + ", self.val + i as i64)?;
        }
        write!(f, "O(t^{})", self.prec)
    }
}

impl<F: Scalar> fmt::Debug for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            write!(f, "({c:?})*t^{} + ", self.val + i as i64)?;
        }
        write!(f, "O(t^{})", self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;

    fn s(val: i64, c: &[i64], prec: i64) -> LaurentSeries<Rational> {
        LaurentSeries::new(val, c.iter().map(|&v| Rational::from(v)).collect(), prec)
    }

    #[test]
    fn geometric_inverse() {
        // 1/(1 - t) = 1 + t + t^2 + ...
        let a = s(0, &[1, -1], 5);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, s(0, &[1, 1, 1, 1, 1], 5));
        let one = a.times(&inv);
        assert_eq!(one, s(0, &[1], 5));
    }

    #[test]
    fn valuation_shifts() {
        // (t + t^2)^{-1} = t^{-1} - 1 + t - ...
        let a = s(1, &[1, 1], 4);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.precision(), 2);
        assert_eq!(inv.coeff(0), Some(Rational::from(-1)));
        assert_eq!(inv.coeff(2), None);
    }

    #[test]
    fn precision_tracks_cancellation() {
        let a = s(0, &[1, 2, 3], 3);
        let b = s(0, &[1, 2], 3);
        let d = a.minus(&b);
        assert_eq!(d.valuation(), 2);
        assert_eq!(d.coeff(2), Some(Rational::from(3)));
        let z = a.minus(&a);
        assert!(z.is_unknown_zero());
        assert!(z.inverse().is_none());
    }
}
