//! Eigenstates from the expansion L_λ(γ) = Σ_n A_n (−γ)^{−n−1/2} of
//! ⟨exp((1+γ) q²/ħ)⟩, whose coefficients obey
//!
//!   (1+2n)(1+2n−2λ̂) A_n − 2(1+n) [ (3+3n−2λ̂) A_{n+1} − (2+n) A_{n+2} ] = 0.
//!
//! A terminating sequence with top coefficient A_N needs λ̂ = N + 1/2.
//! Everything here is in units ħ = 1; x is measured in units of √ħ.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, Rational, UniPoly};

/// Coefficients of the three-term relation at index n:
/// c0·A_n + c1·A_{n+1} + c2·A_{n+2} = 0.
pub fn recurrence_coefficients(n: i64, lambda: &Rational) -> [Rational; 3] {
    let l2 = lambda * Rational::from(2);
    let c0 = Rational::from(1 + 2 * n) * (Rational::from(1 + 2 * n) - &l2);
    let c1 = -Rational::from(2 * (1 + n)) * (Rational::from(3 + 3 * n) - &l2);
    let c2 = Rational::from(2 * (1 + n) * (2 + n));
    [c0, c1, c2]
}

/// Termination condition at n = N − 1, (2N−1)(2N−1−2λ̂) A_{N−1} = 0, as a
/// polynomial in λ̂ (dropping the nonzero A_{N−1}).
pub fn termination_polynomial(n_top: u32) -> UniPoly<Rational> {
    let k = Rational::from(2 * n_top as i64 - 1);
    UniPoly::new(vec![&k * &k, -(k * Rational::from(2))])
}

/// λ̂ = (2N−1)/2 for N = 1…max_N, each the root of the termination condition.
pub fn l_spectrum(max_n: u32) -> Result<Vec<Rational>> {
    if max_n < 1 {
        return Err(Error::InvalidInput("l_spectrum needs max_N >= 1".into()));
    }
    Ok((1..=max_n)
        .map(|n| {
            let p = termination_polynomial(n);
            // linear: root = −c0/c1
            -(p.coeff(0) / p.coeff(1))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LSolution {
    /// Index of the top nonzero coefficient A_N; also the level.
    pub level_index: u32,
    pub eigenvalue: Rational,
    /// A_0 … A_N, normalised so that Σ A_n = L_λ(−1) = 1.
    pub coefficients: Vec<Rational>,
    /// Coefficients of ξ^k (ξ = x/√ħ) in the density prefactor:
    /// P(x) = Σ_k c_k ξ^k · exp(−ξ²)/√(πħ).
    pub density_coefficients: Vec<Rational>,
}

impl LSolution {
    pub fn density_polynomial(&self) -> UniPoly<Rational> {
        UniPoly::new(self.density_coefficients.clone())
    }
}

/// Backward solve from A_N = 1, A_{N+1} = 0 at the given λ̂, checking the
/// relation at n = N and termination at n = −1, −2.
pub fn solve_coefficients_at(n_top: u32, lambda: &Rational) -> Result<LSolution> {
    let top = n_top as usize;
    let [c0, _, _] = recurrence_coefficients(n_top as i64, lambda);
    if !c0.is_zero() {
        return Err(Error::Inconsistent(format!(
            "λ = {lambda} does not terminate the recurrence with top coefficient A_{n_top}"
        )));
    }
    // a[i] = A_{i}, with two zero slots above the top
    let mut a = vec![Rational::zero(); top + 3];
    a[top] = Rational::one();
    for n in (0..top).rev() {
        let [c0, c1, c2] = recurrence_coefficients(n as i64, lambda);
        a[n] = -(c1 * &a[n + 1] + c2 * &a[n + 2]) / c0;
    }
    // n = −1 and n = −2: A_{−1} and A_{−2} forced to zero
    for n in [-1i64, -2] {
        let [c0, c1, c2] = recurrence_coefficients(n, lambda);
        let (a1, a2) = if n == -1 { (&a[0], &a[1]) } else { (&Rational::zero(), &a[0]) };
        let rest = c1 * a1 + c2 * a2;
        if !rest.is_zero() {
            return Err(Error::Inconsistent(format!("recurrence does not terminate below n = 0 (at n = {n})")));
        }
        debug_assert!(!c0.is_zero() || n == -1);
    }
    a.truncate(top + 1);
    let total: Rational = a.iter().cloned().sum();
    let scale = total
        .recip()
        .ok_or_else(|| Error::Inconsistent("coefficients sum to zero, cannot normalise".into()))?;
    let coefficients: Vec<Rational> = a.into_iter().map(|x| x * &scale).collect();
    let mut density = vec![Rational::zero(); 2 * top + 1];
    for (n, an) in coefficients.iter().enumerate() {
        let n32 = n as u32;
        density[2 * n] = an * factorial(n32) * Rational::from(4).pow(n32) / factorial(2 * n32);
    }
    Ok(LSolution { level_index: n_top, eigenvalue: lambda.clone(), coefficients, density_coefficients: density })
}

/// Level N at λ̂ = N + 1/2.
pub fn solve_coefficients(n_top: u32) -> Result<LSolution> {
    solve_coefficients_at(n_top, &(Rational::from(n_top) + Rational::half()))
}

/// a_j = Σ_n A_n (n+1/2)(n+3/2)…(n+j−1/2), the j-th γ-derivative of L at γ = −1.
pub fn a_from_a_coefficients(sol: &LSolution, j: u32) -> Rational {
    sol.coefficients
        .iter()
        .enumerate()
        .map(|(n, an)| {
            let s = Rational::from(n as i64) + Rational::half();
            let rising = (0..j).fold(Rational::one(), |acc, i| acc * (&s + Rational::from(i)));
            an * rising
        })
        .sum()
}

/// Alias with the conventional name.
#[allow(non_snake_case)]
pub fn a_from_A(sol: &LSolution, j: u32) -> Rational {
    a_from_a_coefficients(sol, j)
}

/// Samples (x, P(x)) of the probability density for a given ħ.
pub fn density(sol: &LSolution, x_samples: &[Rational], hbar: f64) -> Result<Vec<(Rational, f64)>> {
    if !(hbar > 0.0) {
        return Err(Error::InvalidInput(format!("hbar must be positive, got {hbar}")));
    }
    let coeffs: Vec<f64> = sol.density_coefficients.iter().map(Rational::to_f64).collect();
    let norm = 1.0 / (std::f64::consts::PI * hbar).sqrt();
    Ok(x_samples
        .iter()
        .map(|x| {
            let xi = x.to_f64() / hbar.sqrt();
            let poly = coeffs.iter().rev().fold(0.0, |acc, c| acc * xi + c);
            (x.clone(), poly * (-xi * xi).exp() * norm)
        })
        .collect())
}

/// ∫ P(x) dx by composite Simpson on [−R√ħ, R√ħ], with R large enough that
/// the Gaussian tail is far below double precision.
pub fn density_normalization(sol: &LSolution, hbar: f64) -> f64 {
    let coeffs: Vec<f64> = sol.density_coefficients.iter().map(Rational::to_f64).collect();
    let r = (12.0 + 2.0 * (sol.level_index as f64).sqrt()) * hbar.sqrt();
    let steps = 8000usize;
    let h = 2.0 * r / steps as f64;
    let norm = 1.0 / (std::f64::consts::PI * hbar).sqrt();
    let f = |x: f64| {
        let xi = x / hbar.sqrt();
        coeffs.iter().rev().fold(0.0, |acc, c| acc * xi + c) * (-xi * xi).exp() * norm
    };
    let mut acc = f(-r) + f(r);
    for i in 1..steps {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(-r + i as f64 * h);
    }
    acc * h / 3.0
}

/// Forward iteration of the recurrence from A_0, A_1 at arbitrary λ̂.
pub fn forward_iterate(lambda: &Rational, a0: Rational, a1: Rational, count: usize) -> Vec<Rational> {
    let mut a = vec![a0, a1];
    for n in 0..count.saturating_sub(2) {
        let [c0, c1, c2] = recurrence_coefficients(n as i64, lambda);
        let next = -(c0 * &a[n] + c1 * &a[n + 1]) / c2;
        a.push(next);
    }
    a.truncate(count);
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn spectrum() {
        assert_eq!(l_spectrum(3).unwrap(), vec![q(1, 2), q(3, 2), q(5, 2)]);
    }

    #[test]
    fn level_four() {
        let s = solve_coefficients(4).unwrap();
        assert_eq!(s.coefficients, vec![q(3, 8), q(-3, 2), q(21, 4), q(-15, 2), q(35, 8)]);
        let a4 = &s.coefficients[4];
        assert_eq!(&s.coefficients[3] / a4, q(-12, 7));
        assert_eq!(&s.coefficients[2] / a4, q(6, 5));
        assert_eq!(&s.coefficients[1] / a4, q(-12, 35));
        assert_eq!(&s.coefficients[0] / a4, q(3, 35));
    }

    #[test]
    fn ground_state() {
        let s = solve_coefficients(0).unwrap();
        assert_eq!(s.coefficients, vec![Rational::one()]);
        assert_eq!(s.density_coefficients, vec![Rational::one()]);
        assert_eq!(a_from_A(&s, 0), Rational::one());
        assert_eq!(a_from_A(&s, 1), q(1, 2));
        assert_eq!(a_from_A(&s, 2), q(3, 4));
    }

    #[test]
    fn first_excited_density() {
        let s = solve_coefficients(1).unwrap();
        assert_eq!(s.coefficients, vec![Rational::zero(), Rational::one()]);
        assert_eq!(s.density_coefficients, vec![Rational::zero(), Rational::zero(), q(2, 1)]);
    }

    #[test]
    fn wrong_eigenvalue_rejected() {
        assert!(matches!(solve_coefficients_at(3, &q(5, 2)), Err(Error::Inconsistent(_))));
    }
}
