//! Algebraic consistency of the eigenvalue equations ⟨T_{m,n}(H − λ)⟩ = 0.
//!
//! Three stages: contradictions visible before any elimination (a relation
//! that is just a λ-free nonzero multiple of T_{0,0}); elimination over the
//! field of rational functions of λ̂, which may leave relations in λ̂ alone;
//! and, for each rational λ̂ they allow, the moments forced by the linear
//! system, checked against the Heisenberg determinant.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::exact::roots::isolate_real_roots_uni;
use crate::exact::{Domain, MultiPolynomial, Rational, RationalFunction, Scalar, UniPoly};
use crate::weyl::{constraint_system, WeylCombination, WeylMonomial, HBAR, LAMBDA};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contradiction {
    /// The (m, n) of the condition ⟨T_{m,n}(H − λ)⟩ = 0, or `None` when the
    /// contradiction comes from combining several conditions.
    pub source: Option<(u32, u32)>,
    pub part: String,
    pub statement: String,
}

/// Outcome for one admissible rational λ̂.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    pub lambda: Rational,
    /// Moments fixed by the linear relations at this λ̂, keyed "T{m}_{n}".
    pub forced: BTreeMap<String, Rational>,
    pub violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub max_order: u32,
    pub contradictions: Vec<Contradiction>,
    /// Polynomials in λ̂ that must vanish, after elimination.
    pub lambda_relations: Vec<String>,
    pub candidates: Vec<CandidateReport>,
    pub notes: Vec<String>,
}

/// Reduced row echelon form in place, pivoting only in the first
/// `pivot_cols` columns; returns the pivot columns. Rows past the rank keep
/// whatever remains in the other columns; all-zero rows are dropped.
pub fn rref<F: Scalar>(rows: &mut Vec<Vec<F>>, pivot_cols: usize) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len()).min(pivot_cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x.times(&inv)).collect();
        let pivot_row = rows[r].clone();
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            rows[i] = rows[i].iter().zip(&pivot_row).map(|(x, y)| x.minus(&f.times(y))).collect();
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    pivots
}

// linear forms with ħ = 1; columns are the non-constant moments plus T_{0,0} last
struct LinearSystem {
    columns: Vec<WeylMonomial>,
    forms: Vec<(WeylMonomial, &'static str, WeylCombination)>,
}

impl LinearSystem {
    fn new(h: &WeylCombination, max_order: u32) -> Result<(Self, Vec<Contradiction>)> {
        let rels = constraint_system(h, LAMBDA, max_order)?;
        let mut contradictions = Vec::new();
        let mut forms = Vec::new();
        let mut cols = std::collections::BTreeSet::new();
        for rel in rels {
            for (part, form) in [("real", rel.real), ("imag", rel.imag)] {
                if form.is_zero() {
                    continue;
                }
                let only_norm = form.terms().all(|(w, _)| w.m == 0 && w.n == 0);
                let c = form.coefficient(0, 0);
                if only_norm && !c.has_var(LAMBDA) {
                    contradictions.push(Contradiction {
                        source: Some((rel.source.m, rel.source.n)),
                        part: part.to_string(),
                        statement: format!("{c} = 0"),
                    });
                }
                let unit = form.substitute(HBAR, &Rational::one());
                for (w, _) in unit.terms() {
                    if w.m + w.n > 0 {
                        cols.insert(*w);
                    }
                }
                forms.push((rel.source, part, unit));
            }
        }
        let mut columns: Vec<WeylMonomial> = cols.into_iter().collect();
        // highest order first, so lower moments end up expressed last
        columns.sort_by_key(|w| (std::cmp::Reverse(w.order()), w.m));
        columns.push(WeylMonomial::new(0, 0));
        Ok((LinearSystem { columns, forms }, contradictions))
    }

    fn rows_with<F: Scalar>(&self, conv: impl Fn(&MultiPolynomial) -> F) -> Vec<Vec<F>> {
        self.forms
            .iter()
            .map(|(_, _, form)| self.columns.iter().map(|w| conv(&form.coefficient(w.m, w.n))).collect())
            .collect()
    }
}

fn moment_name(w: &WeylMonomial) -> String {
    crate::moments::moment_symbol(w.m, w.n)
}

// (Δq)², (Δp)² and the symmetric covariance from forced moments, where known
fn heisenberg_check(forced: &BTreeMap<String, Rational>) -> Option<String> {
    let get = |m: u32, n: u32| -> Option<Rational> {
        if m == 0 && n == 0 {
            return Some(Rational::one());
        }
        forced.get(&crate::moments::moment_symbol(m, n)).cloned()
    };
    let var_q = get(2, 0).zip(get(1, 0)).map(|(t20, t10)| &t20 - &(&t10 * &t10));
    let var_p = get(0, 2).zip(get(0, 1)).map(|(t02, t01)| &t02 - &(&t01 * &t01));
    for (name, v) in [("(Δq)²", &var_q), ("(Δp)²", &var_p)] {
        if let Some(v) = v {
            if !v.is_positive() {
                return Some(format!(
                    "{name} = {v} is forced, violating (Δq)²(Δp)² − C² ≥ 1/4 (d_1 ≥ 0)"
                ));
            }
        }
    }
    let cov = get(1, 1).zip(get(1, 0)).zip(get(0, 1)).map(|((t11, t10), t01)| &t11 - &(&t10 * &t01));
    if let (Some(vq), Some(vp), Some(c)) = (var_q, var_p, cov) {
        let d1 = &(&vq * &vp) - &(&c * &c) - Rational::new(1, 4);
        if d1.is_negative() {
            return Some(format!("d_1 = (Δq)²(Δp)² − C² − 1/4 = {d1} < 0"));
        }
    }
    None
}

/// Check whether ⟨T_{m,n}(H − λ)⟩ = 0 for m + n ≤ `max_order` admits any
/// eigenvalue compatible with the uncertainty relation.
pub fn detect_inconsistency(h: &WeylCombination, max_order: u32) -> Result<ConsistencyReport> {
    let (sys, contradictions) = LinearSystem::new(h, max_order)?;
    let mut report = ConsistencyReport {
        consistent: true,
        max_order,
        contradictions,
        lambda_relations: Vec::new(),
        candidates: Vec::new(),
        notes: Vec::new(),
    };
    if !report.contradictions.is_empty() {
        report.consistent = false;
        return Ok(report);
    }

    let ncols = sys.columns.len();
    let mut rows = sys.rows_with(|p| RationalFunction::from_poly(p.clone()));
    // generic λ: pivots are never the T_{0,0} column, so what is left past the
    // rank is a function of λ alone. λ values where a pivot vanishes are not
    // revisited.
    let pivots = rref(&mut rows, ncols - 1);
    let mut lambda_poly: Option<UniPoly<Rational>> = None;
    for row in rows.iter().skip(pivots.len()) {
        let num = row[ncols - 1].numerator().clone();
        let Some(u) = num.to_real_univariate(LAMBDA) else {
            report.notes.push(format!("unhandled relation {num} = 0"));
            continue;
        };
        report.lambda_relations.push(format!("{} = 0", MultiPolynomial::from_real_univariate(LAMBDA, &u)));
        lambda_poly = Some(match lambda_poly {
            None => u,
            Some(g) => g.gcd(&u),
        });
    }

    let Some(g) = lambda_poly else {
        report.notes.push(format!("no algebraic restriction on λ up to order {max_order}"));
        return Ok(report);
    };
    if g.degree() == Some(0) {
        report.consistent = false;
        report.contradictions.push(Contradiction {
            source: None,
            part: "combined".into(),
            statement: format!("the relations in λ have no common solution: {}", report.lambda_relations.join(", ")),
        });
        return Ok(report);
    }
    let roots = isolate_real_roots_uni(&g, &Domain::all())?;
    if roots.is_empty() {
        report.consistent = false;
        report.contradictions.push(Contradiction {
            source: None,
            part: "combined".into(),
            statement: "no real λ satisfies the eigenvalue relations".into(),
        });
        return Ok(report);
    }
    let mut any_ok = false;
    for r in roots {
        let Some(lambda) = r.root.exact().cloned() else {
            report.notes.push(format!("irrational candidate λ ≈ {} not examined", r.root.approx()));
            any_ok = true;
            continue;
        };
        let mut rows = sys.rows_with(|p| {
            p.substitute_rational(LAMBDA, &lambda).as_rational().expect("coefficients are real after substitution")
        });
        let pivots = rref(&mut rows, ncols);
        let mut cand = CandidateReport { lambda: lambda.clone(), forced: BTreeMap::new(), violation: None };
        if pivots.contains(&(ncols - 1)) {
            cand.violation = Some("the linear relations force 1 = 0".into());
        } else {
            for (row, &pc) in rows.iter().zip(&pivots) {
                let free = (0..ncols - 1).filter(|c| !pivots.contains(c));
                if free.into_iter().all(|c| row[c].is_zero()) {
                    cand.forced.insert(moment_name(&sys.columns[pc]), -row[ncols - 1].clone());
                }
            }
            cand.violation = heisenberg_check(&cand.forced);
        }
        if cand.violation.is_none() {
            any_ok = true;
        }
        report.candidates.push(cand);
    }
    if !any_ok {
        report.consistent = false;
        for c in &report.candidates {
            report.contradictions.push(Contradiction {
                source: None,
                part: "combined".into(),
                statement: format!("λ = {}: {}", c.lambda, c.violation.as_deref().unwrap_or("")),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::harmonic_hamiltonian;

    #[test]
    fn momentum_alone() {
        let r = detect_inconsistency(&WeylCombination::monomial(0, 1), 1).unwrap();
        assert!(!r.consistent);
        assert_eq!(r.contradictions[0].source, Some((1, 0)));
        assert_eq!(r.contradictions[0].part, "imag");
        assert_eq!(r.contradictions[0].statement, "1/2*hbar = 0");
    }

    #[test]
    fn free_particle() {
        let r = detect_inconsistency(&WeylCombination::monomial(0, 2), 2).unwrap();
        assert!(!r.consistent, "{r:?}");
        assert_eq!(r.candidates.len(), 1);
        let c = &r.candidates[0];
        assert!(c.lambda.is_zero());
        assert_eq!(c.forced.get("T0_1"), Some(&Rational::zero()));
        assert_eq!(c.forced.get("T0_2"), Some(&Rational::zero()));
        assert!(c.violation.as_ref().unwrap().starts_with("(Δp)² = 0"));
    }

    #[test]
    fn oscillator_passes() {
        let r = detect_inconsistency(&harmonic_hamiltonian(), 4).unwrap();
        assert!(r.consistent, "{r:?}");
        assert!(r.contradictions.is_empty());
    }

    #[test]
    fn rref_rationals() {
        let q = |v: i64| Rational::from(v);
        let mut m = vec![vec![q(2), q(4), q(2)], vec![q(1), q(2), q(1)], vec![q(0), q(1), q(3)]];
        let p = rref(&mut m, 3);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(m, vec![vec![q(1), q(0), q(-5)], vec![q(0), q(1), q(3)]]);
    }
}
