//! Single fermionic mode, [ξ̂†, ξ̂]_+ = ħ, Ĥ = ω ξ̂†ξ̂ − ħω/2, solved from
//! expectation values alone. With N = ⟨ξ̂†ξ̂⟩ and ⟨ξ̂ξ̂†⟩ = ħ − N, an
//! eigenstate with eigenvalue λ satisfies
//!
//!   ⟨Ĥ − λ⟩ = ωN − ħω/2 − λ = 0
//!   ⟨ξ̂(Ĥ − λ)⟩ = (ħω/2 − λ) ξ = 0,   ⟨ξ̂†(Ĥ − λ)⟩ = −(ħω/2 + λ) ξ* = 0
//!   ⟨ξ̂†ξ̂(Ĥ − λ)⟩ = (ħω/2 − λ) N = 0,  ⟨ξ̂ξ̂†(Ĥ − λ)⟩ = −(ħω/2 + λ)(ħ − N) = 0

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{isolate_real_roots, Domain, GaussianRational, MultiPolynomial, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FermionEigenstate {
    pub eigenvalue: Rational,
    /// eigenvalue / ħω
    pub in_units_of_hbar_omega: Rational,
    pub xi: GaussianRational,
    pub xi_star: GaussianRational,
    /// ⟨ξ̂†ξ̂⟩
    pub n_dagger_n: Rational,
    /// ⟨ξ̂ξ̂†⟩
    pub n_n_dagger: Rational,
    /// Δ(ξ̄ξ) = ⟨Δξ̂†Δξ̂⟩ − ħ/2
    pub covariance: Rational,
}

impl FermionEigenstate {
    /// |Δ(ξ̄ξ)| = ħ/2.
    pub fn saturates(&self, hbar: &Rational) -> bool {
        self.covariance.abs() == hbar * Rational::half()
    }
}

/// Both eigenstates, lowest first.
pub fn solve_fermion_spectrum(omega: &Rational, hbar: &Rational) -> Result<Vec<FermionEigenstate>> {
    if !omega.is_positive() || !hbar.is_positive() {
        return Err(Error::InvalidInput(format!("ω and ħ must be positive, got ω = {omega}, ħ = {hbar}")));
    }
    let half_hw = omega * hbar * Rational::half();
    let lam = MultiPolynomial::var("lambda");
    // N from the first equation, substituted into the fourth: (ħ²ω²/4 − λ²)/ω = 0
    let secular = MultiPolynomial::rational(&half_hw * &half_hw) - &lam * &lam;
    let roots = isolate_real_roots(&secular, &Domain::all())?;
    let mut out = Vec::new();
    for r in roots {
        let l = r
            .root
            .exact()
            .cloned()
            .ok_or_else(|| Error::Internal("eigenvalue is not rational".into()))?;
        let n = (&l + &half_hw) / omega;
        let nn = hbar - &n;
        let c_xi = &half_hw - &l;
        let c_xis = -(&half_hw + &l);
        // remaining equations must hold
        if !(&c_xi * &n).is_zero() || !(&c_xis * &nn).is_zero() {
            return Err(Error::Internal(format!("λ = {l} violates the number equations")));
        }
        // ξ* is the conjugate of ξ, so one nonzero coefficient pins both
        if c_xi.is_zero() && c_xis.is_zero() {
            return Err(Error::Internal("ξ left undetermined".into()));
        }
        let xi = GaussianRational::zero();
        let covariance = &n - xi.norm_sqr() - hbar * Rational::half();
        out.push(FermionEigenstate {
            in_units_of_hbar_omega: &l / (omega * hbar),
            eigenvalue: l,
            xi_star: xi.conj(),
            xi,
            n_dagger_n: n,
            n_n_dagger: nn,
            covariance,
        });
    }
    out.sort_by(|a, b| a.eigenvalue.cmp(&b.eigenvalue));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_parameters() {
        let s = solve_fermion_spectrum(&Rational::one(), &Rational::one()).unwrap();
        let e: Vec<_> = s.iter().map(|x| x.eigenvalue.clone()).collect();
        assert_eq!(e, vec![Rational::new(-1, 2), Rational::half()]);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(solve_fermion_spectrum(&Rational::zero(), &Rational::one()).is_err());
    }
}
