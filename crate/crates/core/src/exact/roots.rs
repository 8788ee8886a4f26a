//! Real root isolation over the rationals with Sturm sequences.

use std::cmp::Ordering;

use num_bigint::BigInt;
use serde::Serialize;

use super::poly::MultiPolynomial;
use super::rational::Rational;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// A real algebraic number, either an exact rational or the unique root of
/// `poly` inside the open interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RealRoot {
    Exact { value: Rational },
    Isolated {
        lo: Rational,
        hi: Rational,
        #[serde(skip)]
        poly: UniPoly<Rational>,
    },
}

impl RealRoot {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RealRoot::Exact { value } => Some(value),
            RealRoot::Isolated { .. } => None,
        }
    }

    /// Lower and upper rational bounds (equal for exact roots).
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            RealRoot::Exact { value } => (value.clone(), value.clone()),
            RealRoot::Isolated { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            RealRoot::Exact { value } => value.to_f64(),
            RealRoot::Isolated { .. } => {
                let mut r = self.clone();
                r.refine_to(&Rational::new(1, 1u64 << 60));
                let (lo, hi) = r.bounds();
                ((lo + hi) * Rational::half()).to_f64()
            }
        }
    }

    /// Halve the isolating interval until its width is below `width`.
    pub fn refine_to(&mut self, width: &Rational) {
        if let RealRoot::Isolated { lo, hi, poly } = self {
            // hi is never a root; lo may be a neighbouring root
            let s_hi = poly.sign_at(hi);
            while &(&*hi - &*lo) >= width {
                let mid = (&*lo + &*hi) * Rational::half();
                let s = poly.sign_at(&mid);
                if s == 0 {
                    *self = RealRoot::Exact { value: mid };
                    return;
                }
                if s == s_hi {
                    *hi = mid;
                } else {
                    *lo = mid;
                }
            }
        }
    }

    /// Bisect once.
    fn bisect(&mut self) {
        if let RealRoot::Isolated { lo, hi, .. } = self {
            let w = (&*hi - &*lo) * Rational::half();
            self.refine_to(&w);
        }
    }

    /// Exact comparison of two distinct-or-equal real roots.
    pub fn cmp_root(&self, other: &RealRoot) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            match (&a, &b) {
                (RealRoot::Exact { value: x }, RealRoot::Exact { value: y }) => return x.cmp(y),
                _ => {
                    let (alo, ahi) = a.bounds();
                    let (blo, bhi) = b.bounds();
                    if ahi < blo || (ahi == blo && (a.exact().is_none() || b.exact().is_none())) {
                        return Ordering::Less;
                    }
                    if bhi < alo || (bhi == alo && (a.exact().is_none() || b.exact().is_none())) {
                        return Ordering::Greater;
                    }
                    if let (RealRoot::Isolated { poly: pa, .. }, RealRoot::Isolated { poly: pb, .. }) = (&a, &b) {
                        // same number iff the common factor has a root in the overlap
                        let g = pa.gcd(pb);
                        if g.degree().unwrap_or(0) > 0 {
                            let lo = alo.clone().max(blo.clone());
                            let hi = ahi.clone().min(bhi.clone());
                            if lo < hi && count_roots_open(&g, &lo, &hi) > 0 {
                                return Ordering::Equal;
                            }
                        }
                    }
                    if let RealRoot::Exact { value } = &a {
                        if let RealRoot::Isolated { poly, .. } = &b {
                            if poly.eval(value).is_zero() {
                                return Ordering::Equal;
                            }
                        }
                    }
                    if let RealRoot::Exact { value } = &b {
                        if let RealRoot::Isolated { poly, .. } = &a {
                            if poly.eval(value).is_zero() {
                                return Ordering::Equal;
                            }
                        }
                    }
                    a.bisect();
                    b.bisect();
                }
            }
        }
    }

    /// Sign of `g` at this root, exactly.
    pub fn sign_of(&self, g: &UniPoly<Rational>) -> i32 {
        match self {
            RealRoot::Exact { value } => g.sign_at(value),
            RealRoot::Isolated { lo, hi, poly } => {
                if g.is_zero() {
                    return 0;
                }
                let common = poly.gcd(g);
                if common.degree().unwrap_or(0) > 0 && count_roots_open(&common, lo, hi) > 0 {
                    return 0;
                }
                let gs = g.square_free_part();
                let mut r = self.clone();
                loop {
                    let (l, h) = r.bounds();
                    if let RealRoot::Exact { value } = &r {
                        return g.sign_at(value);
                    }
                    if count_roots_open(&gs, &l, &h) == 0 && gs.sign_at(&l) != 0 && gs.sign_at(&h) != 0 {
                        return g.sign_at(&((l + h) * Rational::half()));
                    }
                    r.bisect();
                }
            }
        }
    }
}

/// A distinct real root together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatedRoot {
    pub root: RealRoot,
    pub multiplicity: u32,
}

/// Search domain for root isolation; `None` means unbounded. Both finite
/// ends are inclusive.
#[derive(Clone, Debug, Default)]
pub struct Domain {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
}

impl Domain {
    pub fn all() -> Self {
        Domain { lo: None, hi: None }
    }

    pub fn nonnegative() -> Self {
        Domain { lo: Some(Rational::zero()), hi: None }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|l| x >= l) && self.hi.as_ref().is_none_or(|h| x <= h)
    }
}

fn sturm_sequence(p: &UniPoly<Rational>) -> Vec<UniPoly<Rational>> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign_changes(seq: &[UniPoly<Rational>], x: &Rational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|q| q.sign_at(x)).filter(|s| *s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct roots of a square-free `p` in the open interval (a, b).
pub fn count_roots_open(p: &UniPoly<Rational>, a: &Rational, b: &Rational) -> usize {
    if p.degree().unwrap_or(0) == 0 || a >= b {
        return 0;
    }
    let seq = sturm_sequence(p);
    let n = sign_changes(&seq, a) - sign_changes(&seq, b);
    // Sturm counts (a, b]; drop b itself if it is a root.
    if p.sign_at(b) == 0 {
        n - 1
    } else {
        n
    }
}

struct Isolator<'a> {
    p: &'a UniPoly<Rational>,
    seq: Vec<UniPoly<Rational>>,
    lc2: Rational,
}

impl Isolator<'_> {
    // roots in (a, b], with sign-change counts va = V(a), vb = V(b)
    fn isolate(&self, a: Rational, b: Rational, va: usize, vb: usize, out: &mut Vec<RealRoot>) {
        let count = va - vb;
        if count == 0 {
            return;
        }
        if count == 1 {
            if self.p.sign_at(&b) == 0 {
                out.push(RealRoot::Exact { value: b });
            } else {
                out.push(self.pin_down(a, b));
            }
            return;
        }
        let mid = (&a + &b) * Rational::half();
        let vm = sign_changes(&self.seq, &mid);
        self.isolate(a, mid.clone(), va, vm, out);
        self.isolate(mid, b, vm, vb, out);
    }

    // single simple root in the open interval (a, b): report it exactly when rational
    fn pin_down(&self, mut a: Rational, mut b: Rational) -> RealRoot {
        // b is not a root, a may be the previous root
        let sb = self.p.sign_at(&b);
        loop {
            let cand = Rational::simplest_between(&a, &b);
            let sc = self.p.sign_at(&cand);
            if sc == 0 {
                return RealRoot::Exact { value: cand };
            }
            // any rational root has denominator dividing the leading coefficient,
            // so once the width drops below 1/lc^2 the simplest candidate decides
            if (&b - &a) * &self.lc2 < Rational::one() {
                return RealRoot::Isolated { lo: a, hi: b, poly: self.p.clone() };
            }
            if sc == sb {
                b = cand;
            } else {
                a = cand;
            }
            let mid = (&a + &b) * Rational::half();
            let sm = self.p.sign_at(&mid);
            if sm == 0 {
                return RealRoot::Exact { value: mid };
            }
            if sm == sb {
                b = mid;
            } else {
                a = mid;
            }
        }
    }
}

/// Distinct real roots of a square-free rational polynomial inside the domain,
/// in increasing order.
pub fn isolate_square_free(p: &UniPoly<Rational>, domain: &Domain) -> Vec<RealRoot> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let bound = p.root_bound();
    let lo = domain.lo.clone().unwrap_or_else(|| -&bound).max(-&bound);
    let hi = domain.hi.clone().unwrap_or_else(|| bound.clone()).min(bound.clone());
    let mut out = Vec::new();
    if domain.contains(&lo) && p.sign_at(&lo) == 0 {
        out.push(RealRoot::Exact { value: lo.clone() });
    }
    if lo >= hi {
        return out;
    }
    let seq = sturm_sequence(p);
    let lc: BigInt = p.leading_integer();
    let lc = Rational::from_integer(lc);
    let iso = Isolator { p, seq, lc2: &lc * &lc };
    let va = sign_changes(&iso.seq, &lo);
    let vb = sign_changes(&iso.seq, &hi);
    iso.isolate(lo, hi, va, vb, &mut out);
    out
}

/// Real roots with multiplicities of `p` (univariate, real coefficients)
/// inside the domain, in increasing order.
pub fn isolate_real_roots_uni(p: &UniPoly<Rational>, domain: &Domain) -> Result<Vec<IsolatedRoot>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("cannot isolate roots of the zero polynomial".into()));
    }
    let mut all: Vec<IsolatedRoot> = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        for root in isolate_square_free(&factor, domain) {
            all.push(IsolatedRoot { root, multiplicity: mult });
        }
    }
    all.sort_by(|a, b| a.root.cmp_root(&b.root));
    // shrink brackets until their ends avoid every root of p
    let full = p.square_free_part();
    for r in all.iter_mut() {
        while let RealRoot::Isolated { lo, hi, .. } = &r.root {
            if p.sign_at(lo) != 0 && p.sign_at(hi) != 0 && count_roots_open(&full, lo, hi) == 1 {
                break;
            }
            r.root.bisect();
        }
    }
    Ok(all)
}

/// Root isolation for a `MultiPolynomial` in at most one variable with real
/// coefficients.
pub fn isolate_real_roots(p: &MultiPolynomial, domain: &Domain) -> Result<Vec<IsolatedRoot>> {
    let var = p.sole_variable().unwrap_or("x").to_string();
    if p.variables().len() > 1 {
        return Err(Error::InvalidInput(format!("expected a univariate polynomial, got {p}")));
    }
    let u = p
        .to_univariate(&var)
        .ok_or_else(|| Error::InvalidInput(format!("expected a univariate polynomial, got {p}")))?;
    if u.coeffs().iter().any(|c| !c.is_real()) {
        return Err(Error::InvalidInput(format!("polynomial has non-real coefficients: {p}")));
    }
    isolate_real_roots_uni(&u.map(|c| c.re.clone()), domain)
}
