use moment_spectra::exact::{falling, MultiPolynomial, Rational};
use moment_spectra::weyl::{
    anharmonic_hamiltonian, constraint_system, harmonic_hamiltonian, weyl_product, WeylCombination, EPS, HBAR,
    LAMBDA,
};
use proptest::prelude::*;

fn monomial_triple(max_total: u32) -> impl Strategy<Value = [(u32, u32); 3]> {
    prop::array::uniform3((0u32..=4, 0u32..=4))
        .prop_filter("total degree", move |t| t.iter().map(|(m, n)| m + n).sum::<u32>() <= max_total)
}

fn mono(x: (u32, u32)) -> WeylCombination {
    WeylCombination::monomial(x.0, x.1)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn star_product_is_associative(t in monomial_triple(8)) {
        let (a, b, c) = (mono(t[0]), mono(t[1]), mono(t[2]));
        prop_assert_eq!(
            weyl_product(&weyl_product(&a, &b), &c),
            weyl_product(&a, &weyl_product(&b, &c))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn classical_limit_is_commutative(a in (0u32..6, 0u32..6), b in (0u32..6, 0u32..6)) {
        let p = weyl_product(&mono(a), &mono(b)).substitute(HBAR, &Rational::zero());
        prop_assert_eq!(p, WeylCombination::monomial(a.0 + b.0, a.1 + b.1));
    }

    #[test]
    fn adjoint_reverses_products(a in (0u32..5, 0u32..5), b in (0u32..5, 0u32..5), ca in -3i64..=3, cb in 1i64..=3) {
        let x = mono(a).add(&WeylCombination::term(0, 1, MultiPolynomial::var(LAMBDA).scale_rational(&Rational::from(ca))));
        let y = mono(b).scale(&MultiPolynomial::int(cb));
        prop_assert_eq!(weyl_product(&x, &y).adjoint(), weyl_product(&y.adjoint(), &x.adjoint()));
    }
}

fn t(m: i64, n: i64, c: MultiPolynomial) -> WeylCombination {
    if m < 0 || n < 0 {
        return WeylCombination::zero();
    }
    WeylCombination::term(m as u32, n as u32, c)
}

fn r(v: Rational) -> MultiPolynomial {
    MultiPolynomial::rational(v)
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

#[test]
fn harmonic_constraints_are_the_textbook_recurrences() {
    let hb2 = MultiPolynomial::var(HBAR).pow(2);
    let lam = MultiPolynomial::var(LAMBDA);
    let rels = constraint_system(&harmonic_hamiltonian(), LAMBDA, 8).unwrap();
    assert_eq!(rels.len(), (1..=9).sum::<usize>());
    for rel in rels {
        let (m, n) = (rel.source.m as i64, rel.source.n as i64);
        // T_{m+2,n} + T_{m,n+2} − 2λT_{m,n} − n(n−1)/4 ħ² T_{m,n−2} − m(m−1)/4 ħ² T_{m−2,n}
        let real = t(m + 2, n, MultiPolynomial::one())
            .add(&t(m, n + 2, MultiPolynomial::one()))
            .sub(&t(m, n, lam.scale_rational(&Rational::from(2))))
            .sub(&t(m, n - 2, hb2.scale_rational(&q(n * (n - 1), 4))))
            .sub(&t(m - 2, n, hb2.scale_rational(&q(m * (m - 1), 4))));
        assert_eq!(rel.real.scale(&MultiPolynomial::int(2)), real, "real part at ({m},{n})");
        // (ħ/2)(m T_{m−1,n+1} − n T_{m+1,n−1})
        let hb = MultiPolynomial::var(HBAR);
        let imag = t(m - 1, n + 1, hb.scale_rational(&q(m, 2))).sub(&t(m + 1, n - 1, hb.scale_rational(&q(n, 2))));
        assert_eq!(rel.imag, imag, "imaginary part at ({m},{n})");
    }
}

#[test]
fn anharmonic_constraints_match_perturbed_recurrences() {
    let eps = MultiPolynomial::var(EPS);
    let lam = MultiPolynomial::var(LAMBDA);
    let one = Rational::one();
    let rels = constraint_system(&anharmonic_hamiltonian(), LAMBDA, 8).unwrap();
    for rel in rels {
        let (m, n) = (rel.source.m as i64, rel.source.n as i64);
        let real = rel.real.substitute(HBAR, &one).scale(&MultiPolynomial::int(2));
        let ff = |x: i64, k: u32| Rational::from_integer(falling(x.max(0) as u32, k));
        let expect = t(m + 2, n, MultiPolynomial::one())
            .add(&t(m, n + 2, MultiPolynomial::one()))
            .sub(&t(m, n - 2, r(q(n * (n - 1), 4))))
            .sub(&t(m - 2, n, r(q(m * (m - 1), 4))))
            .sub(&t(m, n, lam.scale_rational(&Rational::from(2))))
            .add(&t(m + 4, n, eps.scale_rational(&Rational::from(2))))
            .sub(&t(m + 2, n - 2, eps.scale_rational(&Rational::from(3 * n * (n - 1)))))
            .add(&t(m, n - 4, eps.scale_rational(&(ff(n, 4) * q(1, 8)))));
        assert_eq!(real, expect, "real part at ({m},{n})");

        // m T_{m−1,n+1} = n T_{m+1,n−1} + ε(4n T_{m+3,n−1} − n(n−1)(n−2) T_{m+1,n−3})
        let imag = rel.imag.substitute(HBAR, &one).scale(&MultiPolynomial::int(2));
        let expect = t(m - 1, n + 1, r(Rational::from(m)))
            .sub(&t(m + 1, n - 1, r(Rational::from(n))))
            .sub(&t(m + 3, n - 1, eps.scale_rational(&Rational::from(4 * n))))
            .add(&t(m + 1, n - 3, eps.scale_rational(&ff(n, 3))));
        assert_eq!(imag, expect, "imaginary part at ({m},{n})");
    }
}

#[test]
fn free_particle_relation_from_position() {
    // ⟨T_{1,0}(p − λ)⟩: imaginary part is ħ/2 times the normalisation
    let rels = constraint_system(&WeylCombination::monomial(0, 1), LAMBDA, 1).unwrap();
    let rel = rels.iter().find(|r| r.source.m == 1 && r.source.n == 0).unwrap();
    assert_eq!(rel.imag, WeylCombination::term(0, 0, MultiPolynomial::var(HBAR).scale_rational(&q(1, 2))));
}
