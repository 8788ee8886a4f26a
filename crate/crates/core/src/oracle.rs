//! Floating-point cross-checks in a truncated number basis.
//!
//! Operators are products of q̂ = √(ħ/2)(â + â†) and p̂ = −i√(ħ/2)(â − â†).
//! A product of P ladder factors acting on a state supported on |0⟩…|D−1⟩
//! only ever visits |0⟩…|D−1+P⟩, so states are embedded at dimension D + P
//! before the factors act (and matrices built at D + P are cropped): no
//! boundary contamination.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial, Rational, UniPoly};

type C = Complex64;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Dense operator on span{|0⟩ … |D−1⟩}.
#[derive(Clone, Debug)]
pub struct FockOperator {
    pub dim: usize,
    pub matrix: DMatrix<C>,
}

impl FockOperator {
    pub fn identity(dim: usize) -> Self {
        FockOperator { dim, matrix: DMatrix::identity(dim, dim) }
    }

    /// â|n⟩ = √n |n−1⟩.
    pub fn lowering(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = c((n as f64).sqrt());
        }
        FockOperator { dim, matrix: m }
    }

    pub fn raising(dim: usize) -> Self {
        Self::lowering(dim).adjoint()
    }

    pub fn position(dim: usize, hbar: f64) -> Self {
        let a = Self::lowering(dim);
        let s = (hbar / 2.0).sqrt();
        FockOperator { dim, matrix: (&a.matrix + a.matrix.adjoint()) * c(s) }
    }

    pub fn momentum(dim: usize, hbar: f64) -> Self {
        let a = Self::lowering(dim);
        let s = (hbar / 2.0).sqrt();
        FockOperator { dim, matrix: (&a.matrix - a.matrix.adjoint()) * C::new(0.0, -s) }
    }

    pub fn adjoint(&self) -> Self {
        FockOperator { dim: self.dim, matrix: self.matrix.adjoint() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        FockOperator { dim: self.dim, matrix: &self.matrix * &o.matrix }
    }

    pub fn add(&self, o: &Self) -> Self {
        FockOperator { dim: self.dim, matrix: &self.matrix + &o.matrix }
    }

    pub fn sub(&self, o: &Self) -> Self {
        FockOperator { dim: self.dim, matrix: &self.matrix - &o.matrix }
    }

    pub fn scale(&self, z: C) -> Self {
        FockOperator { dim: self.dim, matrix: &self.matrix * z }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.dim), |acc, _| acc.mul(self))
    }

    /// Top-left D×D block.
    pub fn crop(&self, dim: usize) -> Self {
        FockOperator { dim, matrix: self.matrix.view((0, 0), (dim, dim)).into_owned() }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn expectation(&self, state: &FockState) -> Result<C> {
        if state.dim() > self.dim {
            return Err(Error::InvalidInput(format!("state dimension {} exceeds operator dimension {}", state.dim(), self.dim)));
        }
        let v = state.embedded(self.dim);
        Ok(v.dotc(&(&self.matrix * &v)))
    }
}

// Ladder actions on vectors; callers embed with enough headroom that a†
// never falls off the end.
fn lower(v: &DVector<C>) -> DVector<C> {
    let mut out = DVector::zeros(v.len());
    for n in 1..v.len() {
        out[n - 1] = v[n] * (n as f64).sqrt();
    }
    out
}

fn raise(v: &DVector<C>) -> DVector<C> {
    let mut out = DVector::zeros(v.len());
    for n in 0..v.len() - 1 {
        out[n + 1] = v[n] * ((n + 1) as f64).sqrt();
    }
    out
}

fn apply_q(v: &DVector<C>, hbar: f64) -> DVector<C> {
    (lower(v) + raise(v)) * c((hbar / 2.0).sqrt())
}

fn apply_p(v: &DVector<C>, hbar: f64) -> DVector<C> {
    (lower(v) - raise(v)) * C::new(0.0, -(hbar / 2.0).sqrt())
}

fn repeat(v: &DVector<C>, k: u32, f: impl Fn(&DVector<C>) -> DVector<C>) -> DVector<C> {
    (0..k).fold(v.clone(), |acc, _| f(&acc))
}

/// Normalized vector in span{|0⟩ … |D−1⟩}.
#[derive(Clone, Debug)]
pub struct FockState {
    pub amplitudes: DVector<C>,
}

impl FockState {
    /// Normalizes; fails on the zero vector.
    pub fn new(amplitudes: Vec<C>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let n = v.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidInput("state vector has zero norm".into()));
        }
        Ok(FockState { amplitudes: v / c(n) })
    }

    pub fn number_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidInput(format!("|{n}⟩ does not fit in dimension {dim}")));
        }
        let mut v = vec![c(0.0); dim];
        v[n] = c(1.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    fn embedded(&self, dim: usize) -> DVector<C> {
        let mut v = DVector::zeros(dim);
        v.rows_mut(0, self.dim()).copy_from(&self.amplitudes);
        v
    }

    /// Highest occupied level above `tol`.
    pub fn support(&self, tol: f64) -> usize {
        self.amplitudes.iter().rposition(|z| z.norm() > tol).unwrap_or(0)
    }
}

/// Eigenvalues of H = (p² + q²)/2 + εq⁴ (ħ = 1) in dimension D, with the
/// low-lying ones compared against dimension ⌈1.25 D⌉.
#[derive(Clone, Debug, Serialize)]
pub struct OracleSpectrum {
    pub epsilon: f64,
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    pub check_dim: usize,
    /// Largest shift of the lowest `checked` eigenvalues between the two dimensions.
    pub max_shift: f64,
    pub checked: usize,
    pub converged: bool,
}

pub const CONVERGENCE_TOL: f64 = 1e-9;

fn quartic_eigenvalues(epsilon: f64, dim: usize) -> Vec<f64> {
    let big = dim + 4;
    let q = FockOperator::position(big, 1.0);
    let q2 = q.mul(&q);
    // (p² + q²)/2 = a†a + 1/2 exactly, so ε = 0 reproduces n + 1/2 bit for bit
    let mut real = q2.mul(&q2).crop(dim).matrix.map(|z| z.re * epsilon);
    for n in 0..dim {
        real[(n, n)] += n as f64 + 0.5;
    }
    let diagonal = (0..dim).all(|i| (0..dim).all(|j| i == j || real[(i, j)] == 0.0));
    // the QL sweep would perturb an already diagonal matrix in the last ulp
    let mut e: Vec<f64> = if diagonal {
        real.diagonal().iter().copied().collect()
    } else {
        SymmetricEigen::new(real).eigenvalues.iter().copied().collect()
    };
    e.sort_by(f64::total_cmp);
    e
}

pub fn diagonalize(epsilon: f64, dim: usize) -> Result<OracleSpectrum> {
    if dim < 4 {
        return Err(Error::InvalidInput(format!("dimension must be at least 4, got {dim}")));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidInput(format!("ε must be nonnegative, got {epsilon}")));
    }
    let eigenvalues = quartic_eigenvalues(epsilon, dim);
    let check_dim = dim + (dim + 3) / 4;
    let wider = quartic_eigenvalues(epsilon, check_dim);
    let checked = (dim / 4).clamp(1, 6);
    let max_shift = (0..checked).map(|i| (eigenvalues[i] - wider[i]).abs()).fold(0.0, f64::max);
    let converged = max_shift < CONVERGENCE_TOL;
    if !converged {
        log::warn!("ε = {epsilon}, D = {dim}: low eigenvalues moved by {max_shift:e} at D = {check_dim}");
    }
    Ok(OracleSpectrum { epsilon, dim, eigenvalues, check_dim, max_shift, checked, converged })
}

/// ⟨(q^m p^n)_Weyl⟩ via McCoy's form 2^{−n} Σ_k C(n,k) p^k q^m p^{n−k}.
pub fn weyl_moment(state: &FockState, m: u32, n: u32, hbar: f64) -> Result<f64> {
    let v = state.embedded(state.dim() + (m + n) as usize);
    let mut acc = C::new(0.0, 0.0);
    for k in 0..=n {
        let w = Rational::from_integer(binomial(n, k)).to_f64() / 2f64.powi(n as i32);
        // p is Hermitian: ⟨p^k ψ| q^m p^{n−k} ψ⟩
        let left = repeat(&v, k, |x| apply_p(x, hbar));
        let right = repeat(&repeat(&v, n - k, |x| apply_p(x, hbar)), m, |x| apply_q(x, hbar));
        acc += left.dotc(&right) * w;
    }
    Ok(acc.re)
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentSample {
    pub j: u32,
    /// T_{2j,0} = ⟨q^{2j}⟩
    pub t_2j_0: f64,
    /// T_{2j,2} = ⟨(q^{2j} p²)_Weyl⟩
    pub t_2j_2: f64,
    pub truncation_dominated: bool,
}

/// Moments of the `level`-th eigenvector of the harmonic oscillator
/// truncated to dimension D, for 2j ≤ max_power.
pub fn eigenstate_moments(level: usize, dim: usize, hbar: f64, max_power: u32) -> Result<Vec<MomentSample>> {
    if 2 * level >= dim {
        return Err(Error::InvalidInput(format!("level {level} needs dimension above {}", 2 * level)));
    }
    let big = dim + 2;
    let q = FockOperator::position(big, hbar);
    let p = FockOperator::momentum(big, hbar);
    let h = p.mul(&p).add(&q.mul(&q)).scale(c(0.5)).crop(dim);
    let eig = SymmetricEigen::new(h.matrix.map(|z| z.re));
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let v = eig.eigenvectors.column(order[level]).map(c);
    let state = FockState::new(v.iter().copied().collect())?;
    (0..=max_power / 2)
        .map(|j| {
            Ok(MomentSample {
                j,
                t_2j_0: weyl_moment(&state, 2 * j, 0, hbar)?,
                t_2j_2: weyl_moment(&state, 2 * j, 2, hbar)?,
                truncation_dominated: level + 2 * j as usize + 2 >= dim,
            })
        })
        .collect()
}

/// Cauchy–Schwarz data for f = aⁿ + a†ⁿ, g = aⁿ − a†ⁿ, plus the explicit
/// moment forms for n ≤ 3 (both sides of each inequality).
#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub n: u32,
    pub ff: f64,
    pub gg: f64,
    pub fg_abs2: f64,
    /// ⟨f†f⟩⟨g†g⟩ − |⟨f†g⟩|²
    pub residual: f64,
    /// (lhs, rhs) of the explicit moment inequality for n ≤ 3.
    pub explicit: Option<(f64, f64)>,
    /// relative disagreement between the rescaled ladder residual and lhs − rhs
    pub formulation_gap: Option<f64>,
}

pub fn saturation_check(n: u32, state: &FockState, hbar: f64) -> Result<SaturationReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if state.dim() <= n as usize {
        return Err(Error::InsufficientPrecision(format!(
            "dimension {} leaves no headroom for n = {n}",
            state.dim()
        )));
    }
    let v = state.embedded(state.dim() + n as usize);
    let an = repeat(&v, n, lower);
    let adn = repeat(&v, n, raise);
    let (fv, gv) = (&an + &adn, &an - &adn);
    let (ff, gg, fg) = (fv.norm_squared(), gv.norm_squared(), fv.dotc(&gv));
    let residual = ff * gg - fg.norm_sqr();
    let explicit = explicit_forms(n, state, hbar)?;
    // the explicit forms use f, g rescaled to the real and imaginary parts
    // of (q + ip)ⁿ with their own normalizations
    let formulation_gap = explicit.map(|(l, r)| {
        let kappa = [0.25, 0.25, 4.0 / 81.0][n as usize - 1];
        let s = hbar.powi(2 * n as i32) * kappa;
        (residual * s - (l - r)).abs() / l.abs().max(1.0)
    });
    Ok(SaturationReport { n, ff, gg, fg_abs2: fg.norm_sqr(), residual, explicit, formulation_gap })
}

fn explicit_forms(n: u32, st: &FockState, hb: f64) -> Result<Option<(f64, f64)>> {
    // w(a, b) = ⟨p^a q^b⟩_Weyl
    let w = |a: u32, b: u32| weyl_moment(st, b, a, hb);
    let h2 = hb * hb;
    Ok(match n {
        1 => Some((w(0, 2)? * w(2, 0)?, h2 / 4.0 + w(1, 1)?.powi(2))),
        2 => {
            let l = (w(4, 0)? + w(0, 4)? - 2.0 * w(2, 2)? + h2) * (w(2, 2)? + h2 / 4.0);
            let r = h2 * (w(2, 0)? + w(0, 2)?).powi(2) + (w(1, 3)? - w(3, 1)?).powi(2);
            Some((l, r))
        }
        3 => {
            let a = w(0, 6)? / 9.0 - 2.0 / 3.0 * w(2, 4)? + w(4, 2)? + h2 * w(0, 2)? + h2 * w(2, 0)?;
            let b = w(6, 0)? / 9.0 - 2.0 / 3.0 * w(4, 2)? + w(2, 4)? + h2 * w(2, 0)? + h2 * w(0, 2)?;
            let r = h2 * (h2 / 3.0 + 0.5 * w(4, 0)? + 0.5 * w(0, 4)? + w(2, 2)?).powi(2)
                + (w(5, 1)? / 3.0 + w(1, 5)? / 3.0 - 10.0 / 9.0 * w(3, 3)?).powi(2);
            Some((a * b, r))
        }
        _ => None,
    })
}

/// |α,k⟩ = (1/k) e^{|β|²/2} Σ_j D_j |u_k^j β⟩ with β = α/√(2ħ), so that
/// (√(2ħ) â)^k ψ = α^k ψ, and D_j = Σ_ℓ √(ℓ!)/β^ℓ u_k^{−jℓ} C_ℓ.
pub fn generalized_coherent_state(alpha: C, k: usize, coeffs: &[C], dim: usize, hbar: f64) -> Result<FockState> {
    if k == 0 || coeffs.len() != k {
        return Err(Error::InvalidInput(format!("need k ≥ 1 and exactly k coefficients, got k = {k}, {}", coeffs.len())));
    }
    if alpha.norm() == 0.0 {
        return Err(Error::InvalidInput("α must be nonzero".into()));
    }
    let beta = alpha / (2.0 * hbar).sqrt();
    let u = C::from_polar(1.0, 2.0 * std::f64::consts::PI / k as f64);
    let fact_sqrt = |l: usize| (1..=l).map(|i| (i as f64).sqrt()).product::<f64>();
    let mut amps = vec![c(0.0); dim];
    for j in 0..k {
        let d: C = (0..k)
            .map(|l| coeffs[l] * c(fact_sqrt(l)) / beta.powu(l as u32) * u.powi(-((j * l) as i32)))
            .sum();
        // e^{|β|²/2}|γ⟩ with |γ| = |β| is exp(γ a†)|0⟩
        let gamma = u.powu(j as u32) * beta;
        let mut term = c(1.0);
        for (m, amp) in amps.iter_mut().enumerate() {
            if m > 0 {
                term *= gamma / (m as f64).sqrt();
            }
            *amp += d * term / c(k as f64);
        }
    }
    let tail = amps.last().map(|z| z.norm()).unwrap_or(0.0);
    let st = FockState::new(amps)?;
    if tail > 1e-12 * st.norm().max(1.0) {
        return Err(Error::InsufficientPrecision(format!("coherent-state tail {tail:e} at D = {dim}")));
    }
    Ok(st)
}

/// ‖(√(2ħ)â)^k ψ − α^k ψ‖.
pub fn coherent_eigen_residual(state: &FockState, alpha: C, k: u32, hbar: f64) -> f64 {
    let s = c((2.0 * hbar).sqrt());
    let ak = repeat(&state.amplitudes, k, |x| lower(x) * s);
    (ak - &state.amplitudes * alpha.powu(k)).norm()
}

/// Residual of ⟨F†F⟩⟨G†G⟩ = |⟨F†G⟩|² with F = (2ħ)^{k/2}(â^k + â†^k) − α^k and
/// G = (2ħ)^{k/2}(â^k − â†^k) − α^k.
pub fn coherent_saturation_residual(state: &FockState, alpha: C, k: u32, hbar: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let v = state.embedded(state.dim() + k as usize);
    let s = c((2.0 * hbar).sqrt());
    let ak = repeat(&v, k, |x| lower(x) * s);
    let adk = repeat(&v, k, |x| raise(x) * s);
    let shift = &v * alpha.powu(k);
    let fv = &ak + &adk - &shift;
    let gv = &ak - &adk - &shift;
    Ok(fv.norm_squared() * gv.norm_squared() - fv.dotc(&gv).norm_sqr())
}

/// Σ_{j<k} u_k^{jM} reduced modulo the k-th cyclotomic polynomial: exactly
/// k when k | M, else 0.
pub fn roots_of_unity_sum(k: u32, m: i64) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let phi = cyclotomic(k);
    let e = m.rem_euclid(k as i64) as usize;
    let mut acc = UniPoly::zero();
    for j in 0..k as usize {
        acc = acc.add(&UniPoly::monomial(Rational::one(), (j * e) % k as usize));
    }
    let (_, r) = acc.div_rem(&phi);
    match r.degree() {
        None => Ok(Rational::zero()),
        Some(0) => Ok(r.coeff(0)),
        Some(_) => Err(Error::Internal(format!("Σ u^(jM) left a nonrational remainder {r:?}"))),
    }
}

/// Φ_k(x) from x^k − 1 = Π_{d|k} Φ_d(x).
pub fn cyclotomic(k: u32) -> UniPoly<Rational> {
    let mut p = UniPoly::monomial(Rational::one(), k as usize).sub(&UniPoly::constant(Rational::one()));
    for d in 1..k {
        if k % d == 0 {
            p = p.exact_div(&cyclotomic(d)).expect("cyclotomic factors divide");
        }
    }
    p
}

/// Normalized Hermite function ψ_n(x) for m = ω = 1, by the stable
/// three-term recurrence.
pub fn hermite_function(n: usize, x: f64, hbar: f64) -> f64 {
    let xi = x / hbar.sqrt();
    let mut prev = 0.0;
    let mut cur = (-xi * xi / 2.0).exp() / (std::f64::consts::PI * hbar).powf(0.25);
    for k in 0..n {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * xi * cur - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}
