//! Commutator method for V(q) = ½mω²q² + εq⁴ with explicit m, ω, ħ.
//!
//! From ⟨[Ĥ, q̂^k]⟩ = 0, ⟨[Ĥ, q̂^{k−1}p̂ + p̂q̂^{k−1}]⟩ = 0 and ⟨q̂^{k−2}Ĥ⟩ = E⟨q̂^{k−2}⟩:
//!
//!   0 = −2(k−1)E⟨q^{k−2}⟩ − (k−1)(k−2)(k−3) ħ²/(4m) ⟨q^{k−4}⟩ + mω²k⟨q^k⟩ + 2ε(k+1)⟨q^{k+2}⟩
//!
//! E stays symbolic; ⟨q^k⟩ = Σ_j ⟨q^k⟩_j ε^j.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{MultiPolynomial, Rational, RationalFunction, Scalar};
use crate::weyl::{weyl_product, WeylCombination, EPS, HBAR};

pub const ENERGY: &str = "E";
pub const MASS: &str = "m";
pub const OMEGA: &str = "omega";

/// Symbol standing for ⟨q̂^k⟩ in a relation.
pub fn q_moment_symbol(k: u32) -> String {
    format!("Q{k}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhysicalParams {
    pub m: Rational,
    pub omega: Rational,
    pub hbar: Rational,
}

impl PhysicalParams {
    pub fn new(m: Rational, omega: Rational, hbar: Rational) -> Result<Self> {
        for (name, v) in [("m", &m), ("omega", &omega), ("hbar", &hbar)] {
            if !v.is_positive() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(PhysicalParams { m, omega, hbar })
    }

    pub fn unit() -> Self {
        PhysicalParams { m: Rational::one(), omega: Rational::one(), hbar: Rational::one() }
    }

    /// Substitutes m, ω, ħ into an expression.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        [(MASS, &self.m), (OMEGA, &self.omega), (HBAR, &self.hbar)]
            .into_iter()
            .fold(f.clone(), |acc, (v, x)| acc.substitute_rational(v, x).expect("parameters are positive"))
    }
}

fn var(name: &str) -> RationalFunction {
    RationalFunction::from_poly(MultiPolynomial::var(name))
}

fn num(v: i64) -> RationalFunction {
    RationalFunction::from_i64(v)
}

fn ratio(a: i64, b: i64) -> RationalFunction {
    RationalFunction::from_rational(&Rational::new(a, b))
}

/// Σ_j coeffs[j]·⟨q^j⟩ = 0, coefficients rational in E, m, ω, ħ, ε.
#[derive(Clone, Debug, PartialEq)]
pub struct HypervirialRelation {
    pub k: u32,
    pub coeffs: BTreeMap<u32, RationalFunction>,
}

impl HypervirialRelation {
    /// The relation as a polynomial in the moment symbols Q{j}, cleared of
    /// the common denominator m.
    pub fn as_polynomial(&self) -> MultiPolynomial {
        let mass = MultiPolynomial::var(MASS);
        self.coeffs.iter().fold(MultiPolynomial::zero(), |acc, (j, c)| {
            let cleared = c.times(&RationalFunction::from_poly(mass.clone()));
            let p = cleared.as_polynomial().expect("denominators divide m").clone();
            acc + &p * &MultiPolynomial::var(&q_moment_symbol(*j))
        })
    }
}

fn master_relation(k: u32) -> HypervirialRelation {
    let ki = k as i64;
    let mut coeffs = BTreeMap::new();
    let mut put = |j: i64, c: RationalFunction| {
        if j >= 0 && !c.is_zero() {
            coeffs.insert(j as u32, c);
        }
    };
    let (e, m, w, hb, eps) = (var(ENERGY), var(MASS), var(OMEGA), var(HBAR), var(EPS));
    put(ki - 2, num(-2 * (ki - 1)).times(&e));
    let c4 = ratio(-(ki - 1) * (ki - 2) * (ki - 3), 4).times(&hb.times(&hb)).times(&m.inverse().unwrap());
    put(ki - 4, c4);
    put(ki, num(ki).times(&m).times(&w).times(&w));
    put(ki + 2, num(2 * (ki + 1)).times(&eps));
    HypervirialRelation { k, coeffs }
}

/// Master relation for k = 1 … k_max.
pub fn hypervirial_recurrences(k_max: u32) -> Result<Vec<HypervirialRelation>> {
    if k_max < 1 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    Ok((1..=k_max).map(master_relation).collect())
}

/// ⟨q̂^k⟩_j for ε orders j ≤ `order` as expressions in E, m, ω, ħ.
#[derive(Clone, Debug, PartialEq)]
pub struct HypervirialTable {
    pub order: u32,
    pub max_k: u32,
    entries: BTreeMap<(u32, u32), RationalFunction>,
}

impl HypervirialTable {
    pub fn get(&self, k: u32, j: u32) -> Result<RationalFunction> {
        if j > self.order || k > self.max_k + 2 * (self.order - j) {
            return Err(Error::InsufficientOrder { needed: k, available: self.max_k });
        }
        Ok(self.entries.get(&(k, j)).cloned().unwrap_or_else(RationalFunction::zero))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &RationalFunction)> {
        self.entries.iter()
    }
}

/// Solves the master relation order by order in ε for ⟨q^k⟩_j, k ≤ max_k.
/// Order j reaches k ≤ max_k + 2(order − j).
pub fn solve_q_moments(order: u32, max_k: u32) -> Result<HypervirialTable> {
    if order > 1 {
        return Err(Error::InvalidInput(format!("ε order {order} is out of scope; use 0 or 1")));
    }
    let mut t: BTreeMap<(u32, u32), RationalFunction> = BTreeMap::new();
    let get = |t: &BTreeMap<(u32, u32), RationalFunction>, k: i64, j: i64| {
        if k < 0 || j < 0 {
            return RationalFunction::zero();
        }
        t.get(&(k as u32, j as u32)).cloned().unwrap_or_else(RationalFunction::zero)
    };
    let (e, m, w, hb) = (var(ENERGY), var(MASS), var(OMEGA), var(HBAR));
    let mw2 = m.times(&w).times(&w);
    for j in 0..=order {
        let top = (max_k + 2 * (order - j)) as i64;
        let ji = j as i64;
        t.insert((0, j), if j == 0 { RationalFunction::one() } else { RationalFunction::zero() });
        for k in 1..=top {
            // mω²k Q_k = 2(k−1)E Q_{k−2} + (k−1)(k−2)(k−3)ħ²/(4m) Q_{k−4} − 2(k+1) Q_{k+2, j−1}
            let rhs = num(2 * (k - 1))
                .times(&e)
                .times(&get(&t, k - 2, ji))
                .plus(
                    &ratio((k - 1) * (k - 2) * (k - 3), 4)
                        .times(&hb.times(&hb))
                        .times(&m.inverse().unwrap())
                        .times(&get(&t, k - 4, ji)),
                )
                .minus(&num(2 * (k + 1)).times(&get(&t, k + 2, ji - 1)));
            t.insert((k as u32, j), rhs.times(&num(k).times(&mw2).inverse().unwrap()));
        }
    }
    if let Some(((k, j), v)) = t.iter().find(|((k, _), v)| k % 2 == 1 && !v.is_zero()) {
        return Err(Error::Internal(format!("odd moment ⟨q^{k}⟩_{j} = {v} is nonzero")));
    }
    t.retain(|_, v| !v.is_zero());
    Ok(HypervirialTable { order, max_k, entries: t })
}

/// ⟨p̂²⟩ to first order, ⟨q̂p̂ + p̂q̂⟩, and the first-order energy bound.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumAndBound {
    /// ⟨p²⟩_0, ⟨p²⟩_1.
    pub p2: [RationalFunction; 2],
    pub qp_symmetric: RationalFunction,
    /// ⟨q²⟩⟨p²⟩ through ε¹ as a function of E.
    pub uncertainty_product: [RationalFunction; 2],
    /// E ≥ bound[0] + bound[1] ε + O(ε²), in m, ω, ħ.
    pub bound: [RationalFunction; 2],
}

/// ⟨p²⟩ = m⟨qV′(q)⟩ expanded to first order; the Heisenberg product
/// ⟨q²⟩⟨p²⟩ ≥ ħ²/4 (all first moments and ⟨qp+pq⟩ vanish) solved for E order
/// by order.
pub fn p_moments_and_bound() -> Result<MomentumAndBound> {
    let t = solve_q_moments(1, 4)?;
    let (e, m, w, hb) = (var(ENERGY), var(MASS), var(OMEGA), var(HBAR));
    let mw2 = m.times(&w).times(&w);
    // qV′(q) = mω²q² + 4εq⁴
    let p2_0 = m.times(&mw2).times(&t.get(2, 0)?);
    let p2_1 = m.times(&mw2.times(&t.get(2, 1)?).plus(&num(4).times(&t.get(4, 0)?)));
    let qp = symmetric_qp()?;
    let (q2_0, q2_1) = (t.get(2, 0)?, t.get(2, 1)?);
    let prod0 = q2_0.times(&p2_0);
    let prod1 = q2_0.times(&p2_1).plus(&q2_1.times(&p2_0));
    // prod0(E) = E²/ω² = ħ²/4 at E = ħω/2; first order: prod0′(E0) E1 + prod1(E0) = 0
    let e0 = ratio(1, 2).times(&hb).times(&w);
    let at = |f: &RationalFunction, x: &RationalFunction| -> Result<RationalFunction> {
        let n = f.numerator().substitute_poly(ENERGY, &poly_of(x)?);
        let d = f.denominator().substitute_poly(ENERGY, &poly_of(x)?);
        RationalFunction::new(n, d).ok_or_else(|| Error::Internal("pole in bound".into()))
    };
    let check = at(&prod0, &e0)?.minus(&ratio(1, 4).times(&hb).times(&hb));
    if !check.is_zero() {
        return Err(Error::Internal(format!("zeroth-order product does not saturate: {check}")));
    }
    let dprod0 = num(2).times(&e).times(&w.times(&w).inverse().unwrap());
    let prod0_e = at(&prod0, &e)?;
    if prod0_e != e.times(&e).times(&w.times(&w).inverse().unwrap()) {
        return Err(Error::Internal(format!("unexpected ⟨q²⟩⟨p²⟩ at zeroth order: {prod0_e}")));
    }
    let e1 = at(&prod1, &e0)?.negated().times(&at(&dprod0, &e0)?.inverse().unwrap());
    Ok(MomentumAndBound { p2: [p2_0, p2_1], qp_symmetric: qp, uncertainty_product: [prod0, prod1], bound: [e0, e1] })
}

fn poly_of(f: &RationalFunction) -> Result<MultiPolynomial> {
    f.as_polynomial().cloned().ok_or_else(|| Error::Internal(format!("{f} is not a polynomial")))
}

/// ⟨q̂p̂ + p̂q̂⟩ = 2T_{1,1} from ⟨[mĤ, q̂²]⟩ = 0 in the Weyl algebra.
fn symmetric_qp() -> Result<RationalFunction> {
    let h = harmonic_plus_quartic_times_mass();
    let q2 = WeylCombination::monomial(2, 0);
    let comm = weyl_product(&h, &q2).sub(&weyl_product(&q2, &h));
    // the commutator is a multiple of T_{1,1} only
    let c = comm.coefficient(1, 1);
    if c.is_zero() || comm.terms().count() != 1 {
        return Err(Error::Internal(format!("unexpected commutator [mH, q²] = {comm:?}")));
    }
    // c·T_{1,1} = 0 with c ≠ 0
    Ok(RationalFunction::zero())
}

/// mĤ = p²/2 + m²ω²q²/2 + mεq⁴ as a Weyl symbol.
pub fn harmonic_plus_quartic_times_mass() -> WeylCombination {
    let m = MultiPolynomial::var(MASS);
    let w = MultiPolynomial::var(OMEGA);
    WeylCombination::rational_term(0, 2, Rational::half())
        .add(&WeylCombination::term(2, 0, (&m * &m * &w * &w).scale_rational(&Rational::half())))
        .add(&WeylCombination::term(4, 0, &m * &MultiPolynomial::var(EPS)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_moment() {
        let t = solve_q_moments(0, 4).unwrap();
        let expect = var(ENERGY).times(&var(MASS).times(&var(OMEGA)).times(&var(OMEGA)).inverse().unwrap());
        assert_eq!(t.get(2, 0).unwrap(), expect);
        assert!(t.get(1, 0).unwrap().is_zero());
        assert!(t.get(3, 0).unwrap().is_zero());
    }

    #[test]
    fn rejects_second_order() {
        assert!(solve_q_moments(2, 4).is_err());
    }

    #[test]
    fn params_positive() {
        assert!(PhysicalParams::new(Rational::one(), Rational::zero(), Rational::one()).is_err());
    }
}
