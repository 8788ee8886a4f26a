//! Quartic anharmonic oscillator H = (p² + q²)/2 + ε q⁴ (ħ = 1), order by
//! order in ε with λ = Σ_k λ_(k) ε^k.
//!
//! Moments come from the perturbed recurrences
//!
//!   (m+2)/(m+1) T_{m+2,0} = 2λ T_{m,0} + m(m−1)/4 T_{m−2,0} − 2ε (m+3)/(m+1) T_{m+4,0}
//!   T_{m−2,n+2} = (n+1)/(m−1) [T_{m,n} + ε (4 T_{m+2,n} − n(n−1) T_{m,n−2})]
//!
//! with T_{1,0} = −4ε T_{3,0} and T_{m,1} = 0. Positivity of the reduced
//! moment matrix, expanded in ε, then pins each λ_(k) between bounds coming
//! from different blocks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    det_small, GaussianRational, LaurentSeries, MultiPolynomial, Rational, RationalFunction, EXACT,
};
use crate::exact::{Domain, RealRoot};
use crate::positivity::{extract_spectrum, feasible_set, reduced_basis, schur_blocks, FeasibleRegion};
use crate::weyl::{weyl_product_unit, WeylCombination, EPS, LAMBDA};

/// ε-series with coefficients that are rational functions of the unknowns.
pub type EpsSeries = LaurentSeries<RationalFunction>;

/// Name of the unknown λ_(k).
pub fn lambda_var(k: u32) -> String {
    format!("{LAMBDA}_{k}")
}

/// Coefficients T^{(k)}_{m,n} of T_{m,n} = Σ_k T^{(k)}_{m,n} ε^k.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedMomentTable {
    order: u32,
    max_order: u32,
    entries: BTreeMap<(u32, u32, u32), MultiPolynomial>,
}

impl PerturbedMomentTable {
    /// Highest ε power K.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Total moment order m + n available at every ε power.
    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Odd moments vanish at every order.
    pub fn is_structural_zero(m: u32, n: u32) -> bool {
        m % 2 == 1 || n % 2 == 1
    }

    pub fn get(&self, m: u32, n: u32, k: u32) -> Result<MultiPolynomial> {
        if m + n > self.max_order {
            return Err(Error::InsufficientOrder { needed: m + n, available: self.max_order });
        }
        if k > self.order {
            return Err(Error::InsufficientPrecision(format!("ε^{k} requested, table stops at ε^{}", self.order)));
        }
        Ok(self.entries.get(&(m, n, k)).cloned().unwrap_or_else(MultiPolynomial::zero))
    }

    /// Σ_k T^{(k)} ε^k as a polynomial in the variable [`EPS`].
    pub fn moment(&self, m: u32, n: u32) -> Result<MultiPolynomial> {
        let eps = MultiPolynomial::var(EPS);
        let mut acc = MultiPolynomial::zero();
        for k in 0..=self.order {
            let c = self.get(m, n, k)?;
            if !c.is_zero() {
                acc = acc + &c * &eps.pow(k);
            }
        }
        Ok(acc)
    }

    pub fn map(&self, f: impl Fn(&MultiPolynomial) -> MultiPolynomial) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(key, v)| (*key, f(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        PerturbedMomentTable { order: self.order, max_order: self.max_order, entries }
    }
}

/// Moment table with symbolic λ_(0) … λ_(K).
pub fn perturbed_moments(k_max: u32, max_order: u32) -> Result<PerturbedMomentTable> {
    let lambdas: Vec<MultiPolynomial> = (0..=k_max).map(|k| MultiPolynomial::var(&lambda_var(k))).collect();
    perturbed_moments_with(&lambdas, max_order)
}

/// Moment table for given λ_(k) expressions (constants or variables); the
/// table's ε order is `lambdas.len() − 1`.
pub fn perturbed_moments_with(lambdas: &[MultiPolynomial], max_order: u32) -> Result<PerturbedMomentTable> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("need at least λ_(0)".into()));
    }
    let k_max = lambdas.len() as u32 - 1;
    // order j is needed through total order max_order + 2(K − j)
    let reach = |j: u32| max_order + 2 * (k_max - j);
    let mut t: BTreeMap<(u32, u32, u32), MultiPolynomial> = BTreeMap::new();
    let get = |t: &BTreeMap<(u32, u32, u32), MultiPolynomial>, m: i64, n: i64, k: i64| -> MultiPolynomial {
        if m < 0 || n < 0 || k < 0 {
            return MultiPolynomial::zero();
        }
        t.get(&(m as u32, n as u32, k as u32)).cloned().unwrap_or_else(MultiPolynomial::zero)
    };
    for k in 0..=k_max {
        let top = reach(k) as i64;
        let ki = k as i64;
        // n = 0 column
        let mut col: BTreeMap<i64, MultiPolynomial> = BTreeMap::new();
        col.insert(0, if k == 0 { MultiPolynomial::one() } else { MultiPolynomial::zero() });
        col.insert(1, get(&t, 3, 0, ki - 1).scale_rational(&Rational::from(-4)));
        for m in 0..=top - 2 {
            // (λT)^{(k)} at index m
            let mut lam_t = MultiPolynomial::zero();
            for i in 0..=k {
                let prev = if i == 0 { col[&m].clone() } else { get(&t, m, 0, ki - i as i64) };
                if !prev.is_zero() {
                    lam_t = lam_t + &lambdas[i as usize] * &prev;
                }
            }
            let lower = if m >= 2 { col[&(m - 2)].clone() } else { MultiPolynomial::zero() };
            let rhs = lam_t.scale_rational(&Rational::from(2))
                + lower.scale_rational(&Rational::new(m * (m - 1), 4))
                - get(&t, m + 4, 0, ki - 1).scale_rational(&Rational::new(2 * (m + 3), m + 1));
            col.insert(m + 2, rhs.scale_rational(&Rational::new(m + 1, m + 2)));
        }
        for (m, v) in col {
            if m <= top && !v.is_zero() {
                t.insert((m as u32, 0, k), v);
            }
        }
        // n = 1 column vanishes; n ≥ 2 from the second recurrence
        for b in 2..=top {
            for a in 0..=top - b {
                let f = Rational::new(b - 1, a + 1);
                let v = get(&t, a + 2, b - 2, ki).scale_rational(&f)
                    + get(&t, a + 4, b - 2, ki - 1).scale_rational(&(&f * Rational::from(4)))
                    - get(&t, a + 2, b - 4, ki - 1).scale_rational(&(&f * Rational::from((b - 2) * (b - 3))));
                if !v.is_zero() {
                    t.insert((a as u32, b as u32, k), v);
                }
            }
        }
    }
    // the recurrences never produce odd moments from even ones
    if let Some(((m, n, k), v)) = t.iter().find(|((m, n, _), _)| PerturbedMomentTable::is_structural_zero(*m, *n)) {
        return Err(Error::Internal(format!("odd moment T^({k})_{{{m},{n}}} = {v} is nonzero")));
    }
    t.retain(|(m, n, k), _| *m + *n <= reach(*k));
    let entries = t.into_iter().filter(|((m, n, _), _)| m + n <= max_order).collect();
    Ok(PerturbedMomentTable { order: k_max, max_order, entries })
}

/// M′ for `blocks` 2×2 blocks with ε-series entries known to O(ε^prec).
/// Entries that only involve structurally vanishing moments are exact.
fn series_matrix(
    table: &PerturbedMomentTable,
    blocks: u32,
    prec: u32,
    conv: &dyn Fn(&MultiPolynomial) -> RationalFunction,
) -> Result<Vec<Vec<EpsSeries>>> {
    if prec > table.order() + 1 {
        return Err(Error::InsufficientPrecision(format!(
            "precision ε^{prec} needs moments through ε^{}, table has ε^{}",
            prec - 1,
            table.order()
        )));
    }
    let basis = reduced_basis(blocks);
    let ops: Vec<WeylCombination> = basis.iter().map(|&(m, n)| WeylCombination::monomial(m, n)).collect();
    let mut rows = Vec::with_capacity(ops.len());
    for a in &ops {
        let mut row = Vec::with_capacity(ops.len());
        for b in &ops {
            let form = weyl_product_unit(a, b);
            let mut coeffs = vec![MultiPolynomial::zero(); prec as usize];
            let mut exact = true;
            for (w, c) in form.terms() {
                if w.m == 0 && w.n == 0 {
                    coeffs[0] = &coeffs[0] + c;
                    continue;
                }
                if PerturbedMomentTable::is_structural_zero(w.m, w.n) {
                    continue;
                }
                exact = false;
                for (k, slot) in coeffs.iter_mut().enumerate() {
                    let v = table.get(w.m, w.n, k as u32)?;
                    if !v.is_zero() {
                        *slot = &*slot + &(c * &v);
                    }
                }
            }
            let p = if exact { EXACT } else { prec as i64 };
            row.push(LaurentSeries::new(0, coeffs.iter().map(conv).collect(), p));
        }
        rows.push(row);
    }
    Ok(rows)
}

fn block_dets(m: &[Vec<EpsSeries>]) -> Result<Vec<EpsSeries>> {
    let n = m.len();
    let mut sizes = vec![1];
    let mut used = 1;
    while used < n {
        sizes.push(2.min(n - used));
        used += 2;
    }
    let blocks = schur_blocks(m, &sizes).map_err(|block| Error::SingularPivot { block })?;
    Ok(blocks.iter().skip(1).map(|b| det_small(b)).collect())
}

/// det(A′_1) … det(A′_blocks) as ε-series to O(ε^{K+1}). λ_(0) is fixed to
/// level + 1/2 when a level is given; all other λ_(k) stay symbolic.
pub fn perturbed_determinants(level: Option<u32>, k_max: u32, blocks: u32) -> Result<Vec<EpsSeries>> {
    let table = perturbed_moments(k_max, 2 * blocks)?;
    let table = match level {
        Some(l) => {
            let l0 = Rational::from(l) + Rational::half();
            table.map(|p| p.substitute_rational(&lambda_var(0), &l0))
        }
        None => table,
    };
    let m = series_matrix(&table, blocks, k_max + 1, &|p| RationalFunction::from_poly(p.clone()))?;
    block_dets(&m)
}

/// λ = Σ λ_(k) ε^k for one level, as far as it could be pinned down.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerturbedEigenvalue {
    pub level: u32,
    pub coefficients: Vec<Rational>,
    /// Number of 2×2 blocks that pinned each coefficient.
    pub blocks_used: Vec<u32>,
    /// First order that could not be pinned, with the surviving feasible set.
    pub unresolved: Option<UnresolvedOrder>,
    /// Isolated values where a lower block's leading coefficient vanishes;
    /// their sign is only decided by later orders and they are set aside.
    pub degenerate: Vec<DegenerateBranch>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateBranch {
    pub order: u32,
    pub values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnresolvedOrder {
    pub order: u32,
    pub feasible: Vec<FeasibleRegion>,
    pub reason: String,
}

impl PerturbedEigenvalue {
    /// "1/2 + 3/4 ε − 21/8 ε^2".
    pub fn series_string(&self) -> String {
        let mut s = String::new();
        for (k, c) in self.coefficients.iter().enumerate() {
            if k > 0 && c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if k == 0 {
                s.push_str(&c.to_string());
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
                s.push_str(&mag.to_string());
                s.push_str(if k == 1 { " ε".into() } else { format!(" ε^{k}") }.as_str());
            }
        }
        s
    }
}

/// Search limits for pinching.
#[derive(Clone, Debug)]
pub struct PinchConfig {
    /// Largest number of 2×2 blocks tried.
    pub max_blocks: u32,
    /// Largest number of extra ε orders carried beyond the one being solved.
    pub max_extra_orders: u32,
}

impl Default for PinchConfig {
    fn default() -> Self {
        PinchConfig { max_blocks: 8, max_extra_orders: 10 }
    }
}

// Determinants at order k: λ_(0..k) known, λ_(k) given by `current`
// (the variable LAMBDA or a trial value), later λ_(j) set to `filler`.
pub fn stage_dets(
    known: &[Rational],
    current: MultiPolynomial,
    blocks: u32,
    extra: u32,
    filler: &Rational,
) -> Result<Option<Vec<EpsSeries>>> {
    let k = known.len() as u32;
    let mut lambdas: Vec<MultiPolynomial> = known.iter().map(|v| MultiPolynomial::rational(v.clone())).collect();
    lambdas.push(current);
    lambdas.extend((0..extra).map(|_| MultiPolynomial::rational(filler.clone())));
    let table = perturbed_moments_with(&lambdas, 2 * blocks)?;
    let m = series_matrix(&table, blocks, k + 1 + extra, &|p| RationalFunction::from_poly(p.clone()))?;
    match block_dets(&m) {
        Ok(d) => Ok(Some(d)),
        Err(Error::SingularPivot { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

// leading known coefficient of a series, if any is nonzero
fn leading(s: &EpsSeries) -> Option<RationalFunction> {
    if s.is_unknown_zero() {
        return None;
    }
    s.coeff(s.valuation())
}

enum Stage {
    /// Some determinant has no known leading term: carry more orders.
    Starved,
    /// Feasible set of the leading coefficients, and their denominators.
    Feasible(Vec<FeasibleRegion>, Vec<MultiPolynomial>),
}

fn stage_feasible(known: &[Rational], blocks: u32, extra: u32, filler: &Rational) -> Result<Stage> {
    let k = known.len();
    let Some(dets) = stage_dets(known, MultiPolynomial::var(LAMBDA), blocks, extra, filler)? else {
        return Ok(Stage::Starved);
    };
    let mut constraints = Vec::new();
    let mut dens = Vec::new();
    for (i, d) in dets.iter().enumerate() {
        let Some(c) = leading(d) else { return Ok(Stage::Starved) };
        log::debug!("order {k}, blocks {blocks}, extra {extra}: d_{} ~ ({c}) ε^{}", i + 1, d.valuation());
        // sign of num/den is the sign of num·den
        let p = c.numerator() * c.denominator();
        if p.variables().iter().any(|v| v != LAMBDA) || !p.is_real() {
            return Err(Error::Internal(format!("unexpected leading coefficient {c}")));
        }
        constraints.push(p);
        dens.push(c.denominator().clone());
    }
    Ok(Stage::Feasible(feasible_set(&constraints, &Domain::all())?, dens))
}

fn leading_constants(dets: &[EpsSeries]) -> Result<Vec<Option<Rational>>> {
    dets.iter()
        .map(|d| match leading(d) {
            None => Ok(None),
            Some(c) => c
                .as_constant()
                .map(|g| Some(g.re))
                .ok_or_else(|| Error::Internal(format!("non-constant coefficient {c}"))),
        })
        .collect()
}

// A trial value is rejected when some determinant has a negative leading
// term that does not depend on the fillers for higher orders.
fn survives(known: &[Rational], value: &Rational, blocks: u32, extra: u32) -> Result<bool> {
    let at = |f: i64| stage_dets(known, MultiPolynomial::rational(value.clone()), blocks, extra, &Rational::from(f));
    let (Some(a), Some(b)) = (at(0)?, at(1)?) else { return Ok(true) };
    let (a, b) = (leading_constants(&a)?, leading_constants(&b)?);
    Ok(!a.iter().zip(&b).any(|(x, y)| matches!((x, y), (Some(x), Some(y)) if x == y && x.is_negative())))
}

enum Pinch {
    Value(Rational, Vec<Rational>),
    Open(Vec<FeasibleRegion>),
}

fn pinch(known: &[Rational], blocks: u32, extra: u32, filler: &Rational) -> Result<Option<Pinch>> {
    let Stage::Feasible(regions, dens) = stage_feasible(known, blocks, extra, filler)? else {
        return Ok(None);
    };
    if regions.is_empty() {
        return Err(Error::Inconsistent(format!("no λ_({}) keeps every determinant nonnegative", known.len())));
    }
    if regions.iter().any(|r| !matches!(r, FeasibleRegion::Point { .. })) {
        return Ok(Some(Pinch::Open(regions)));
    }
    let mut alive = Vec::new();
    let mut degenerate = Vec::new();
    for r in &regions {
        let FeasibleRegion::Point { at } = r else { unreachable!() };
        let Some(v) = at.exact() else {
            alive.push(r.clone());
            continue;
        };
        // a lower block's leading term vanishes here, so its sign is decided
        // only by later orders
        let g = GaussianRational::real(v.clone());
        if dens.iter().any(|d| d.substitute(LAMBDA, &g).is_zero()) {
            degenerate.push(v.clone());
        } else if survives(known, v, blocks, extra)? {
            alive.push(r.clone());
        }
    }
    match alive.as_slice() {
        [] => Ok(Some(Pinch::Open(regions))),
        [FeasibleRegion::Point { at: RealRoot::Exact { value } }] => Ok(Some(Pinch::Value(value.clone(), degenerate))),
        _ => Ok(Some(Pinch::Open(alive))),
    }
}

/// λ_(0) … λ_(K) for the given level by pinching determinant positivity
/// order by order. More ε orders are carried until every determinant has a
/// known leading term, then more blocks are added until the bounds meet.
/// Unknown λ_(j) beyond the current order are replaced by two different
/// fillers; a value is accepted only if both agree.
pub fn solve_perturbed_eigenvalue(level: u32, k_max: u32) -> Result<PerturbedEigenvalue> {
    solve_perturbed_eigenvalue_with(level, k_max, &PinchConfig::default())
}

pub fn solve_perturbed_eigenvalue_with(level: u32, k_max: u32, cfg: &PinchConfig) -> Result<PerturbedEigenvalue> {
    // ε⁰: the harmonic spectrum
    let dets = crate::positivity::det_sequence(level + 2)?;
    let spec = extract_spectrum(&dets)?;
    let lambda0 = spec
        .certified_rationals()
        .and_then(|c| c.get(level as usize).cloned())
        .ok_or_else(|| Error::Internal(format!("level {level} not certified at zeroth order")))?;
    let mut out = PerturbedEigenvalue {
        level,
        coefficients: vec![lambda0],
        blocks_used: vec![level + 2],
        unresolved: None,
        degenerate: Vec::new(),
    };
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut extra = 0;
    'orders: for k in 1..=k_max {
        let mut last = UnresolvedOrder { order: k, feasible: Vec::new(), reason: String::new() };
        let mut blocks = level + 2;
        while blocks <= cfg.max_blocks {
            let found = loop {
                if let Some(p) = pinch(&out.coefficients, blocks, extra, &zero)? {
                    break Some(p);
                }
                if extra == cfg.max_extra_orders {
                    break None;
                }
                extra += 1;
            };
            match found {
                None => {
                    last.reason = format!("{blocks} blocks need more than {} carried orders", cfg.max_extra_orders);
                    break;
                }
                Some(Pinch::Value(v, degenerate)) => {
                    let agree = extra == 0
                        || matches!(pinch(&out.coefficients, blocks, extra, &one)?, Some(Pinch::Value(w, _)) if w == v);
                    if agree {
                        log::info!("λ_({k}) = {v} with {blocks} blocks, {extra} carried orders");
                        if !degenerate.is_empty() {
                            out.degenerate.push(DegenerateBranch { order: k, values: degenerate });
                        }
                        out.coefficients.push(v);
                        out.blocks_used.push(blocks);
                        continue 'orders;
                    }
                    last.reason = format!("value {v} depends on the filler for higher orders");
                    extra += 1;
                    if extra > cfg.max_extra_orders {
                        break;
                    }
                }
                Some(Pinch::Open(f)) => {
                    last.feasible = f;
                    last.reason = format!("bounds do not meet with {blocks} blocks");
                    blocks += 1;
                }
            }
        }
        out.unresolved = Some(last);
        break;
    }
    Ok(out)
}
