use std::fmt::Debug;

use super::gaussian::GaussianRational;
use super::rational::Rational;

/// Minimal field interface shared by the exact scalar types.
///
/// Method names avoid clashing with `std::ops`.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse, `None` for zero (or when it cannot be formed).
    fn inverse(&self) -> Option<Self>;
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.recip()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn from_i64(v: i64) -> Self {
        GaussianRational::from(v)
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn from_rational(r: &Rational) -> Self {
        GaussianRational::real(r.clone())
    }
}

/// Determinant by Laplace expansion along the first row. Only meant for the
/// small pivot blocks (size ≤ 4) of the block factorisation.
pub fn det_small<F: Scalar>(m: &[Vec<F>]) -> F {
    let n = m.len();
    match n {
        0 => F::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].times(&m[1][1]).minus(&m[0][1].times(&m[1][0])),
        _ => {
            let mut acc = F::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor = minor_of(m, 0, c);
                let term = m[0][c].times(&det_small(&minor));
                acc = if c % 2 == 0 { acc.plus(&term) } else { acc.minus(&term) };
            }
            acc
        }
    }
}

fn minor_of<F: Scalar>(m: &[Vec<F>], row: usize, col: usize) -> Vec<Vec<F>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, line)| {
            line.iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Inverse through the adjugate; `None` when the determinant has no inverse.
pub fn inverse_small<F: Scalar>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let det_inv = det_small(m).inverse()?;
    if n == 1 {
        return Some(vec![vec![det_inv]]);
    }
    let mut out = vec![vec![F::zero(); n]; n];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            // adj[r][c] = (-1)^{r+c} det(minor(c, r))
            let cof = det_small(&minor_of(m, c, r));
            let cof = if (r + c) % 2 == 0 { cof } else { cof.negated() };
            *cell = cof.times(&det_inv);
        }
    }
    Some(out)
}

pub fn mat_mul<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![F::zero(); cols]; rows];
    for r in 0..rows {
        for k in 0..inner {
            if a[r][k].is_zero() {
                continue;
            }
            for c in 0..cols {
                if b[k][c].is_zero() {
                    continue;
                }
                out[r][c] = out[r][c].plus(&a[r][k].times(&b[k][c]));
            }
        }
    }
    out
}
