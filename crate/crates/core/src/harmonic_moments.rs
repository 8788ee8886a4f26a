//! Closed-form moments of harmonic-oscillator eigenstates (ħ = 1):
//! T_{2j,2k} = (2j)!(2k)!(j+k)! / (j! k! (2j+2k)!) · a_{j+k}(λ̂), all other
//! moments zero, with a_ℓ from a two-term recurrence.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, GaussianRational, MultiPolynomial, Rational};
use crate::moments::MomentTable;
use crate::weyl::LAMBDA;

/// a_ℓ and b_ℓ = ℓ!/(2ℓ)! · a_ℓ for ℓ = 0…L, polynomials in λ̂.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicMomentCoefficients {
    pub a: Vec<MultiPolynomial>,
    pub b: Vec<MultiPolynomial>,
    pub max_order: u32,
}

/// a_{ℓ+1} = λ̂(2ℓ+1)/(ℓ+1) a_ℓ + (2ℓ+1)(2ℓ)(2ℓ−1)/(8(ℓ+1)) a_{ℓ−1}, a_0 = 1, a_1 = λ̂.
pub fn a_recurrence(l_max: u32) -> Result<HarmonicMomentCoefficients> {
    if l_max < 1 {
        return Err(Error::InvalidInput("a-recurrence needs L >= 1".into()));
    }
    let lam = MultiPolynomial::var(LAMBDA);
    let mut a = vec![MultiPolynomial::one(), lam.clone()];
    for l in 1..l_max as i64 {
        let c1 = Rational::new(2 * l + 1, l + 1);
        let c2 = Rational::new((2 * l + 1) * (2 * l) * (2 * l - 1), 8 * (l + 1));
        let next = (&lam * &a[l as usize]).scale_rational(&c1) + a[l as usize - 1].scale_rational(&c2);
        a.push(next);
    }
    let b = a
        .iter()
        .enumerate()
        .map(|(l, al)| al.scale_rational(&(factorial(l as u32) / factorial(2 * l as u32))))
        .collect();
    Ok(HarmonicMomentCoefficients { a, b, max_order: l_max })
}

fn t_factor(j: u32, k: u32) -> Rational {
    factorial(2 * j) * factorial(2 * k) * factorial(j + k)
        / (factorial(j) * factorial(k) * factorial(2 * j + 2 * k))
}

/// T_{2j,2k}(λ̂).
pub fn moment_from_a(j: u32, k: u32, coeffs: &HarmonicMomentCoefficients) -> Result<MultiPolynomial> {
    let l = j + k;
    let a = coeffs
        .a
        .get(l as usize)
        .ok_or(Error::InsufficientOrder { needed: 2 * l, available: 2 * coeffs.max_order })?;
    Ok(a.scale_rational(&t_factor(j, k)))
}

/// T_{m,n}(λ̂) for arbitrary indices; zero unless both are even.
pub fn moment(m: u32, n: u32, coeffs: &HarmonicMomentCoefficients) -> Result<MultiPolynomial> {
    if m + n > 2 * coeffs.max_order {
        return Err(Error::InsufficientOrder { needed: m + n, available: 2 * coeffs.max_order });
    }
    if m % 2 == 1 || n % 2 == 1 {
        return Ok(MultiPolynomial::zero());
    }
    moment_from_a(m / 2, n / 2, coeffs)
}

/// S_{j,k} = j! k! / ((2j)! (2k)!) · T_{2j,2k}; depends on j + k only.
pub fn s_coefficient(j: u32, k: u32, coeffs: &HarmonicMomentCoefficients) -> Result<MultiPolynomial> {
    let t = moment_from_a(j, k, coeffs)?;
    Ok(t.scale_rational(&(factorial(j) * factorial(k) / (factorial(2 * j) * factorial(2 * k)))))
}

/// Moment table through order 2L (even entries only).
pub fn moment_table(coeffs: &HarmonicMomentCoefficients) -> MomentTable {
    let mut t = MomentTable::new(2 * coeffs.max_order, true);
    for l in 0..=coeffs.max_order {
        for j in 0..=l {
            let v = moment_from_a(j, l - j, coeffs).expect("index within range");
            t.set(2 * j, 2 * (l - j), v);
        }
    }
    t
}

/// Per-ℓ outcome of the generating-function check.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratingFunctionCheck {
    pub lambda: Rational,
    pub b: Vec<Rational>,
    pub ode_relation_holds: bool,
    /// Only evaluated at λ̂ = 1/2, where b_ℓ = 4^{−ℓ}.
    pub geometric_closed_form: Option<bool>,
}

/// b_ℓ(λ̂) for a fixed λ̂ and ℓ = 0…L, checked against the coefficient
/// relation (ℓ+1) b_{ℓ+1} − (λ̂/2) b_ℓ − ℓ b_{ℓ−1}/16 = 0 of the
/// generating-function ODE.
pub fn generating_function_report(lambda: &Rational, l_max: u32) -> Result<GeneratingFunctionCheck> {
    let coeffs = a_recurrence(l_max.max(1))?;
    let val = GaussianRational::real(lambda.clone());
    let b: Vec<Rational> = coeffs
        .b
        .iter()
        .map(|p| p.substitute(LAMBDA, &val).as_rational().expect("univariate in lambda"))
        .collect();
    let mut ok = true;
    for l in 0..l_max as usize {
        let prev = if l == 0 { Rational::zero() } else { b[l - 1].clone() };
        let rel = Rational::from((l + 1) as i64) * &b[l + 1]
            - lambda * Rational::half() * &b[l]
            - Rational::new(l as i64, 16) * prev;
        ok &= rel.is_zero();
    }
    let geometric = (lambda == &Rational::half()).then(|| {
        b.iter()
            .enumerate()
            .all(|(l, bl)| *bl == Rational::new(1, 4).pow(l as u32))
    });
    Ok(GeneratingFunctionCheck { lambda: lambda.clone(), b, ode_relation_holds: ok, geometric_closed_form: geometric })
}

pub fn generating_function_check(lambda: &Rational, l_max: u32) -> bool {
    generating_function_report(lambda, l_max)
        .map(|r| r.ode_relation_holds && r.geometric_closed_form.unwrap_or(true))
        .unwrap_or(false)
}
