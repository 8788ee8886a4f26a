use moment_spectra::exact::{factorial, MultiPolynomial, Rational};
use moment_spectra::harmonic_moments::{
    a_recurrence, generating_function_check, moment, moment_table, s_coefficient,
};
use moment_spectra::weyl::{constraint_system, harmonic_hamiltonian, HBAR, LAMBDA};
use proptest::prelude::*;

#[test]
fn closed_form_solves_every_constraint() {
    // relations at order ≤ 8 reach moments of order 10
    let table = moment_table(&a_recurrence(5).unwrap());
    for rel in constraint_system(&harmonic_hamiltonian(), LAMBDA, 8).unwrap() {
        for part in [&rel.real, &rel.imag] {
            let unit = part.substitute(HBAR, &Rational::one());
            assert!(table.evaluate(&unit).unwrap().is_zero(), "relation from {}", rel.source);
        }
    }
}

#[test]
fn parity_of_a() {
    let c = a_recurrence(12).unwrap();
    let minus = MultiPolynomial::var(LAMBDA).scale_rational(&Rational::from(-1));
    for (l, a) in c.a.iter().enumerate() {
        let flipped = a.substitute_poly(LAMBDA, &minus);
        let expect = if l % 2 == 0 { a.clone() } else { -a };
        assert_eq!(flipped, expect, "a_{l}");
        assert_eq!(a.degree_in(LAMBDA), l as u32);
    }
}

#[test]
fn s_depends_on_the_sum_only() {
    let c = a_recurrence(8).unwrap();
    for l in 0..8u32 {
        for j in 0..l {
            let k = l - j;
            assert_eq!(s_coefficient(j + 1, k - 1, &c).unwrap(), s_coefficient(j, k, &c).unwrap());
        }
    }
    // recomputed from T
    let t = moment(4, 2, &c).unwrap();
    let s = t.scale_rational(&(factorial(2) * factorial(1) / (factorial(4) * factorial(2))));
    assert_eq!(s, s_coefficient(2, 1, &c).unwrap());
}

#[test]
fn b_relation_at_ground_state_is_geometric() {
    assert!(generating_function_check(&Rational::half(), 20));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn b_relation_holds_for_any_lambda(n in -40i64..40, d in 1i64..9) {
        prop_assert!(generating_function_check(&Rational::new(n, d), 15));
    }
}
