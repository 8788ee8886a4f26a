//! Positivity of reduced moment matrices.
//!
//! The reduced matrix M′_J is the Gram matrix ⟨ξ ξ†⟩ of the operators
//! 1, T_{k,0}, T_{k−1,1} (k = 1…2J), all with ħ = 1. Congruence by unit
//! lower-triangular transforms splits it into a 1×1 block followed by 2×2
//! blocks A′_n; their determinants d_n must all be nonnegative.

mod consistency;
mod feasible;

pub use consistency::{detect_inconsistency, rref, CandidateReport, ConsistencyReport, Contradiction};
pub use feasible::{extract_spectrum, feasible_set, Endpoint, FeasibleRegion, SpectrumReport};

use crate::error::{Error, Result};
use crate::exact::{det_fraction_free, inverse_small, mat_mul, MultiPolynomial, RationalFunction, Scalar};
use crate::harmonic_moments::{a_recurrence, moment_table};
use crate::moments::MomentTable;
use crate::weyl::{weyl_product_unit, WeylCombination, LAMBDA};

/// A square matrix of polynomial moment expressions with the operator
/// labels (m, n) of its rows and columns.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix {
    pub entries: Vec<Vec<MultiPolynomial>>,
    pub basis_labels: Vec<(u32, u32)>,
}

impl MomentMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &MultiPolynomial {
        &self.entries[r][c]
    }

    /// entry(r, c) = conj(entry(c, r)), treating every variable as real.
    pub fn is_hermitian(&self) -> bool {
        let n = self.size();
        (0..n).all(|r| (r..n).all(|c| self.entries[r][c] == self.entries[c][r].conj()))
    }

    pub fn determinant(&self) -> Result<MultiPolynomial> {
        det_fraction_free(&self.entries)
    }

    /// Leading principal submatrix of size `k`.
    pub fn leading(&self, k: usize) -> MomentMatrix {
        MomentMatrix {
            entries: self.entries[..k].iter().map(|row| row[..k].to_vec()).collect(),
            basis_labels: self.basis_labels[..k].to_vec(),
        }
    }

    /// Block sizes 1, 2, 2, … of the reduced basis.
    pub fn block_sizes(&self) -> Vec<usize> {
        let n = self.size();
        let mut sizes = vec![1];
        let mut used = 1;
        while used < n {
            let s = 2.min(n - used);
            sizes.push(s);
            used += s;
        }
        sizes
    }
}

/// Basis labels 1, (1,0), (0,1), (2,0), (1,1), … up to total order `two_j`.
pub fn reduced_basis(two_j: u32) -> Vec<(u32, u32)> {
    let mut out = vec![(0, 0)];
    for k in 1..=two_j {
        out.push((k, 0));
        out.push((k - 1, 1));
    }
    out
}

/// M′_J for J = `two_j`/2. Needs moments through order 2·`two_j`.
pub fn build_reduced_matrix(two_j: u32, moments: &MomentTable) -> Result<MomentMatrix> {
    if moments.max_order() < 2 * two_j {
        return Err(Error::InsufficientOrder { needed: 2 * two_j, available: moments.max_order() });
    }
    let basis = reduced_basis(two_j);
    let ops: Vec<WeylCombination> = basis.iter().map(|&(m, n)| WeylCombination::monomial(m, n)).collect();
    let mut entries = Vec::with_capacity(ops.len());
    for a in &ops {
        let mut row = Vec::with_capacity(ops.len());
        for b in &ops {
            // T_c is Hermitian, so ⟨ξ_r ξ_c†⟩ = ⟨T_r T_c⟩
            row.push(moments.evaluate(&weyl_product_unit(a, b))?);
        }
        entries.push(row);
    }
    Ok(MomentMatrix { entries, basis_labels: basis })
}

/// Successive Schur complements with the given block sizes. Returns the
/// diagonal blocks of L M L†, or the index of the first singular pivot block.
pub fn schur_blocks<F: Scalar>(m: &[Vec<F>], sizes: &[usize]) -> std::result::Result<Vec<Vec<Vec<F>>>, usize> {
    let mut w: Vec<Vec<F>> = m.to_vec();
    let mut out = Vec::with_capacity(sizes.len());
    for (idx, &s) in sizes.iter().enumerate() {
        let n = w.len();
        assert!(s <= n, "block sizes exceed matrix size");
        let a: Vec<Vec<F>> = w[..s].iter().map(|row| row[..s].to_vec()).collect();
        if s == n {
            out.push(a);
            break;
        }
        let ainv = inverse_small(&a).ok_or(idx)?;
        let upper: Vec<Vec<F>> = w[..s].iter().map(|row| row[s..].to_vec()).collect();
        let lower: Vec<Vec<F>> = w[s..].iter().map(|row| row[..s].to_vec()).collect();
        let corr = mat_mul(&mat_mul(&lower, &ainv), &upper);
        w = w[s..]
            .iter()
            .zip(&corr)
            .map(|(row, crow)| row[s..].iter().zip(crow).map(|(x, y)| x.minus(y)).collect())
            .collect();
        out.push(a);
    }
    Ok(out)
}

/// One diagonal block of the congruence-transformed matrix.
#[derive(Clone, Debug)]
pub struct PositivityBlock {
    /// 0 for the leading 1×1 block, n ≥ 1 for A′_n.
    pub n: usize,
    pub matrix: Vec<Vec<RationalFunction>>,
    pub determinant: RationalFunction,
}

impl PositivityBlock {
    /// The determinant as a polynomial, when it is one.
    pub fn determinant_polynomial(&self) -> Option<&MultiPolynomial> {
        self.determinant.as_polynomial()
    }
}

/// Block-diagonalise M′_J into 1, A′_1, A′_2, … over the field of rational
/// functions of the matrix entries' variables.
pub fn block_diagonalize(m: &MomentMatrix) -> Result<Vec<PositivityBlock>> {
    let rf: Vec<Vec<RationalFunction>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|e| RationalFunction::from_poly(e.clone())).collect())
        .collect();
    let blocks = schur_blocks(&rf, &m.block_sizes()).map_err(|block| Error::SingularPivot { block })?;
    Ok(blocks
        .into_iter()
        .enumerate()
        .map(|(n, matrix)| {
            let determinant = crate::exact::det_small(&matrix);
            PositivityBlock { n, matrix, determinant }
        })
        .collect())
}

/// d_1 … d_N for the harmonic oscillator, from the block-diagonalised M′_{N/2}.
pub fn det_sequence(n_max: u32) -> Result<Vec<MultiPolynomial>> {
    if n_max < 1 {
        return Err(Error::InvalidInput("det_sequence needs N >= 1".into()));
    }
    let coeffs = a_recurrence(n_max)?;
    let table = moment_table(&coeffs);
    let m = build_reduced_matrix(n_max, &table)?;
    let blocks = block_diagonalize(&m)?;
    let mut out = Vec::with_capacity(n_max as usize);
    for b in blocks.iter().skip(1) {
        let d = b
            .determinant_polynomial()
            .ok_or_else(|| Error::Internal(format!("d_{} is not a polynomial: {}", b.n, b.determinant)))?;
        if !d.is_real() || d.variables().iter().any(|v| v != LAMBDA) {
            return Err(Error::Internal(format!("d_{} is not a real polynomial in {LAMBDA}: {d}", b.n)));
        }
        log::debug!("d_{} = {}", b.n, d);
        out.push(d.clone());
    }
    Ok(out)
}
