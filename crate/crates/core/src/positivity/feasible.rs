use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::roots::isolate_real_roots_uni;
use crate::exact::{Domain, MultiPolynomial, Rational, RealRoot, UniPoly};
use crate::weyl::LAMBDA;

/// End of a feasible interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Endpoint {
    pub at: RealRoot,
    pub closed: bool,
}

/// Connected piece of {λ : every d_n(λ) ≥ 0}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleRegion {
    Point { at: RealRoot },
    /// `None` ends are unbounded.
    Interval { lo: Option<Endpoint>, hi: Option<Endpoint> },
}

// a node is a root of some constraint or a finite domain end
struct Node {
    at: RealRoot,
}

fn upper(r: &RealRoot) -> Rational {
    r.bounds().1
}

fn lower(r: &RealRoot) -> Rational {
    r.bounds().0
}

// rational strictly between two nodes (left < right)
fn between(left: &mut RealRoot, right: &mut RealRoot) -> Rational {
    let mut width = Rational::one();
    loop {
        let (l, r) = (upper(left), lower(right));
        if l < r {
            return (l + r) * Rational::half();
        }
        width = width * Rational::half();
        left.refine_to(&width);
        right.refine_to(&width);
    }
}

fn to_univariate(d: &MultiPolynomial) -> Result<UniPoly<Rational>> {
    if d.variables().iter().any(|v| v != LAMBDA) {
        return Err(Error::InvalidInput(format!("constraint {d} is not univariate in {LAMBDA}")));
    }
    d.to_real_univariate(LAMBDA)
        .ok_or_else(|| Error::InvalidInput(format!("constraint {d} has non-real coefficients")))
}

/// Exact description of {λ ∈ domain : d(λ) ≥ 0 for every d}, as ordered,
/// disjoint regions. The d must be real polynomials in λ̂.
pub fn feasible_set(dets: &[MultiPolynomial], domain: &Domain) -> Result<Vec<FeasibleRegion>> {
    let polys: Vec<UniPoly<Rational>> = dets.iter().map(to_univariate).collect::<Result<_>>()?;
    if polys.iter().any(|p| p.degree().unwrap_or(0) == 0 && p.sign_at(&Rational::zero()) < 0) {
        return Ok(Vec::new());
    }
    let product = polys
        .iter()
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .fold(UniPoly::constant(Rational::one()), |acc, p| acc.mul(p));

    let mut nodes: Vec<Node> = Vec::new();
    if product.degree().unwrap_or(0) > 0 {
        for r in isolate_real_roots_uni(&product.square_free_part(), domain)? {
            nodes.push(Node { at: r.root });
        }
    }
    if let Some(lo) = &domain.lo {
        if nodes.first().map_or(true, |n| n.at.exact() != Some(lo)) {
            nodes.insert(0, Node { at: RealRoot::Exact { value: lo.clone() } });
        }
    }
    if let Some(hi) = &domain.hi {
        if nodes.last().map_or(true, |n| n.at.exact() != Some(hi)) {
            nodes.push(Node { at: RealRoot::Exact { value: hi.clone() } });
        }
    }

    let ok_at = |x: &Rational| polys.iter().all(|p| p.sign_at(x) >= 0);
    let ok_root = |r: &RealRoot| polys.iter().all(|p| r.sign_of(p) >= 0);

    // alternate gap, node, gap, node, …, gap; gaps outside the domain are skipped
    #[derive(Clone)]
    enum Piece {
        Gap(bool),
        Node(RealRoot, bool),
    }
    let mut pieces: Vec<Piece> = Vec::new();
    if nodes.is_empty() {
        pieces.push(Piece::Gap(ok_at(&Rational::zero())));
    } else {
        if domain.lo.is_none() {
            let mut first = nodes[0].at.clone();
            first.refine_to(&Rational::one());
            pieces.push(Piece::Gap(ok_at(&(lower(&first) - Rational::one()))));
        }
        for i in 0..nodes.len() {
            let at = nodes[i].at.clone();
            let ok = ok_root(&at);
            pieces.push(Piece::Node(at, ok));
            if i + 1 < nodes.len() {
                let mut l = nodes[i].at.clone();
                let mut r = nodes[i + 1].at.clone();
                let x = between(&mut l, &mut r);
                pieces.push(Piece::Gap(ok_at(&x)));
            }
        }
        if domain.hi.is_none() {
            let last = &nodes[nodes.len() - 1].at;
            pieces.push(Piece::Gap(ok_at(&(upper(last) + Rational::one()))));
        }
    }

    let mut out = Vec::new();
    let mut i = 0;
    while i < pieces.len() {
        let feasible = match &pieces[i] {
            Piece::Gap(ok) | Piece::Node(_, ok) => *ok,
        };
        if !feasible {
            i += 1;
            continue;
        }
        let start = i;
        while i + 1 < pieces.len() && matches!(&pieces[i + 1], Piece::Gap(true) | Piece::Node(_, true)) {
            i += 1;
        }
        let end = i;
        i += 1;
        if start == end {
            if let Piece::Node(at, _) = &pieces[start] {
                out.push(FeasibleRegion::Point { at: at.clone() });
                continue;
            }
        }
        let lo = match &pieces[start] {
            Piece::Node(at, _) => Some(Endpoint { at: at.clone(), closed: true }),
            Piece::Gap(_) => match start.checked_sub(1).map(|k| &pieces[k]) {
                Some(Piece::Node(at, _)) => Some(Endpoint { at: at.clone(), closed: false }),
                _ => None,
            },
        };
        let hi = match &pieces[end] {
            Piece::Node(at, _) => Some(Endpoint { at: at.clone(), closed: true }),
            Piece::Gap(_) => match pieces.get(end + 1) {
                Some(Piece::Node(at, _)) => Some(Endpoint { at: at.clone(), closed: false }),
                _ => None,
            },
        };
        out.push(FeasibleRegion::Interval { lo, hi });
    }
    Ok(out)
}

/// Eigenvalue candidates from determinant positivity on λ̂ ≥ 0.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    /// Isolated feasible points below the resolution bound.
    pub certified_eigenvalues: Vec<RealRoot>,
    /// Largest node; nothing at or above it is resolved.
    pub resolution_bound: RealRoot,
    /// Some feasible interval of positive length lies below the bound.
    pub feasible_continuum: bool,
    #[serde(skip)]
    pub determinants: Vec<MultiPolynomial>,
    pub regions: Vec<FeasibleRegion>,
    pub notes: Vec<String>,
}

impl SpectrumReport {
    /// Certified values, when all are rational.
    pub fn certified_rationals(&self) -> Option<Vec<Rational>> {
        self.certified_eigenvalues.iter().map(|r| r.exact().cloned()).collect()
    }
}

pub fn extract_spectrum(dets: &[MultiPolynomial]) -> Result<SpectrumReport> {
    if dets.is_empty() {
        return Err(Error::InvalidInput("no determinant constraints given".into()));
    }
    let domain = Domain::nonnegative();
    let regions = feasible_set(dets, &domain)?;
    if regions.is_empty() {
        return Err(Error::Inconsistent("no λ ≥ 0 satisfies every determinant condition".into()));
    }
    let mut product = UniPoly::constant(Rational::one());
    for d in dets {
        let u = to_univariate(d)?;
        if u.degree().unwrap_or(0) > 0 {
            product = product.mul(&u);
        }
    }
    let roots = if product.degree().unwrap_or(0) > 0 {
        isolate_real_roots_uni(&product, &domain)?
    } else {
        Vec::new()
    };
    let mut notes = Vec::new();
    let bound = match roots.last() {
        Some(r) => r.root.clone(),
        None => {
            notes.push("no nonnegative node: nothing can be certified".to_string());
            RealRoot::Exact { value: Rational::zero() }
        }
    };
    let below = |r: &RealRoot| r.cmp_root(&bound) == std::cmp::Ordering::Less;
    let mut certified = Vec::new();
    let mut continuum = roots.is_empty();
    for region in &regions {
        match region {
            FeasibleRegion::Point { at } if below(at) => certified.push(at.clone()),
            FeasibleRegion::Point { .. } => {}
            FeasibleRegion::Interval { lo, .. } => {
                let starts_below = lo.as_ref().map_or(true, |e| below(&e.at));
                if starts_below {
                    continuum = true;
                }
            }
        }
    }
    if continuum {
        notes.push("feasible continuum below the resolution bound".to_string());
    }
    log::info!("certified {} eigenvalues below {:?}", certified.len(), bound);
    Ok(SpectrumReport {
        certified_eigenvalues: certified,
        resolution_bound: bound,
        feasible_continuum: continuum,
        determinants: dets.to_vec(),
        regions,
        notes,
    })
}
