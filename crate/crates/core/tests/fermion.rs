use moment_spectra::exact::{GaussianRational, Rational};
use moment_spectra::fermion::solve_fermion_spectrum;
use num_complex::Complex64;
use proptest::prelude::*;

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

#[test]
fn eigenstate_data() {
    let (w, hb) = (q(3, 2), q(2, 5));
    let s = solve_fermion_spectrum(&w, &hb).unwrap();
    assert_eq!(s.len(), 2);
    let (lo, hi) = (&s[0], &s[1]);
    assert_eq!(lo.eigenvalue, -(&w * &hb) / Rational::from(2));
    assert_eq!(lo.in_units_of_hbar_omega, q(-1, 2));
    assert_eq!(lo.xi, GaussianRational::zero());
    assert_eq!(lo.n_dagger_n, Rational::zero());
    assert_eq!(lo.n_n_dagger, hb);
    assert_eq!(hi.eigenvalue, &w * &hb / Rational::from(2));
    assert_eq!(hi.xi_star, GaussianRational::zero());
    assert_eq!(hi.n_n_dagger, Rational::zero());
    assert_eq!(hi.n_dagger_n, hb);
    assert_eq!(lo.covariance, -(&hb / Rational::from(2)));
    assert_eq!(hi.covariance, &hb / Rational::from(2));
}

// two-level representation: basis (|−⟩, |+⟩), ξ̂|+⟩ = √ħ|−⟩
type M2 = [[Complex64; 2]; 2];

fn xi_matrix(hbar: f64) -> M2 {
    let z = Complex64::new(0.0, 0.0);
    [[z, Complex64::new(hbar.sqrt(), 0.0)], [z, z]]
}

fn dagger(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn expect(a: &M2, v: &[Complex64; 2]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += v[i].conj() * a[i][j] * v[j];
        }
    }
    acc
}

#[test]
fn general_state_expectation_values() {
    let hbar = 0.7;
    let xi = xi_matrix(hbar);
    let xd = dagger(&xi);
    for i in 0..=12 {
        for j in 0..=12 {
            // rational multiples of π
            let r = std::f64::consts::PI * i as f64 / 12.0;
            let s = 2.0 * std::f64::consts::PI * j as f64 / 12.0;
            let v = [Complex64::new(r.cos(), 0.0), Complex64::from_polar(r.sin(), s)];
            let want = Complex64::from_polar(0.5 * hbar.sqrt() * (2.0 * r).sin(), s);
            assert!((expect(&xi, &v) - want).norm() < 1e-14);
            assert!((expect(&xd, &v) - want.conj()).norm() < 1e-14);
            assert!((expect(&mul(&xd, &xi), &v).re - hbar * r.sin().powi(2)).abs() < 1e-14);
            assert!((expect(&mul(&xi, &xd), &v).re - hbar * r.cos().powi(2)).abs() < 1e-14);
            // graded covariance stays within ħ/2
            let x = expect(&xi, &v);
            let cov = expect(&mul(&xd, &xi), &v).re - x.norm_sqr() - 0.5 * hbar;
            assert!(cov.abs() <= 0.5 * hbar + 1e-14);
        }
    }
}

#[test]
fn ladder_commutator_gives_the_phase_rotation() {
    // [ξ̂, Ĥ] = ħω ξ̂, so ξ(t) = ξ(0) e^{−iωt}
    let (hbar, w) = (0.7, 1.3);
    let xi = xi_matrix(hbar);
    let xd = dagger(&xi);
    let n = mul(&xd, &xi);
    let h: M2 = std::array::from_fn(|i| std::array::from_fn(|j| w * n[i][j] - if i == j { Complex64::new(0.5 * hbar * w, 0.0) } else { Complex64::new(0.0, 0.0) }));
    let a = mul(&xi, &h);
    let b = mul(&h, &xi);
    for i in 0..2 {
        for j in 0..2 {
            assert!((a[i][j] - b[i][j] - hbar * w * xi[i][j]).norm() < 1e-14);
        }
    }
    // anticommutator
    let ac = mul(&xd, &xi);
    let ca = mul(&xi, &xd);
    assert!((ac[0][0] + ca[0][0] - hbar).norm() < 1e-14 && (ac[1][1] + ca[1][1] - hbar).norm() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn both_eigenstates_saturate(a in 1i64..20, b in 1i64..20, c in 1i64..20, d in 1i64..20) {
        let (w, hb) = (q(a, b), q(c, d));
        let s = solve_fermion_spectrum(&w, &hb).unwrap();
        prop_assert_eq!(s.len(), 2);
        for e in &s {
            prop_assert!(e.saturates(&hb));
            prop_assert_eq!(&e.n_dagger_n + &e.n_n_dagger, hb.clone());
        }
        prop_assert_eq!(&s[1].eigenvalue - &s[0].eigenvalue, &w * &hb);
    }
}
