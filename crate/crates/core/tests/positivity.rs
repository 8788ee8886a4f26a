use moment_spectra::exact::{det_fraction_free, MultiPolynomial, Rational, RealRoot};
use moment_spectra::harmonic_moments::{a_recurrence, moment_table};
use moment_spectra::moments::MomentTable;
use moment_spectra::positivity::{
    block_diagonalize, build_reduced_matrix, det_sequence, extract_spectrum, FeasibleRegion,
};
use moment_spectra::weyl::LAMBDA;

fn lam() -> MultiPolynomial {
    MultiPolynomial::var(LAMBDA)
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

// (1/4^{n-1}) ∏_{k=1}^n (λ − α_k)(λ + α_k), α_k = (2k − 1)/2, built by hand
fn product_formula(n: i64) -> MultiPolynomial {
    let mut p = MultiPolynomial::rational(Rational::new(1, 4).pow((n - 1) as _));
    for k in 1..=n {
        let a = MultiPolynomial::rational(q(2 * k - 1, 2));
        p = &p * &(&(&lam() - &a) * &(&lam() + &a));
    }
    p
}

#[test]
fn determinants_match_product_formula() {
    let d = det_sequence(8).unwrap();
    assert_eq!(d.len(), 8);
    for (n, dn) in d.iter().enumerate() {
        assert_eq!(dn, &product_formula(n as i64 + 1), "d_{}", n + 1);
        assert_eq!(dn.degree_in(LAMBDA), 2 * (n as u32 + 1));
    }
    for n in 0..7 {
        let ratio = d[n + 1].exact_div(&d[n]).unwrap();
        let a = q(2 * n as i64 + 3, 2);
        let expect = (&(&lam() * &lam()) - &MultiPolynomial::rational(&a * &a)).scale_rational(&q(1, 4));
        assert_eq!(ratio, expect);
    }
}

#[test]
fn five_by_five_determinant() {
    let m = build_reduced_matrix(2, &moment_table(&a_recurrence(2).unwrap())).unwrap();
    let h = |a: i64, b: i64| &lam() + &MultiPolynomial::rational(q(a, b));
    let expect = (&(&h(1, 2).pow(2) * &h(-1, 2).pow(2)) * &(&h(3, 2) * &h(-3, 2))).scale_rational(&q(1, 4));
    assert_eq!(m.determinant().unwrap(), expect);
    let blocks = block_diagonalize(&m).unwrap();
    let prod = blocks.iter().fold(MultiPolynomial::one(), |acc, b| &acc * b.determinant_polynomial().unwrap());
    assert_eq!(prod, expect);
    // third block: [[a2 − a1², i a1], [−i a1, a2/3 + 1/4]]
    let a2 = (&lam() * &lam() + MultiPolynomial::rational(q(1, 4))).scale_rational(&q(3, 2));
    let b2 = &blocks[2].matrix;
    assert_eq!(b2[0][0].as_polynomial().unwrap(), &(&a2 - &(&lam() * &lam())));
    assert_eq!(
        b2[1][1].as_polynomial().unwrap(),
        &(a2.scale_rational(&q(1, 3)) + MultiPolynomial::rational(q(1, 4)))
    );
}

#[test]
fn hermitian_for_symbolic_moments() {
    for two_j in 0..=6 {
        let m = build_reduced_matrix(two_j, &MomentTable::symbolic(2 * two_j)).unwrap();
        assert!(m.is_hermitian(), "J = {two_j}/2");
        assert_eq!(m.size(), 1 + 2 * two_j as usize);
    }
}

#[test]
fn heisenberg_minor() {
    let m = build_reduced_matrix(1, &MomentTable::symbolic(2)).unwrap();
    let minor = vec![
        vec![m.entry(1, 1).clone(), m.entry(1, 2).clone()],
        vec![m.entry(2, 1).clone(), m.entry(2, 2).clone()],
    ];
    let t = |s: &str| MultiPolynomial::var(s);
    let expect = &(&t("T2_0") * &t("T0_2")) - &(&t("T1_1") * &t("T1_1")) - MultiPolynomial::rational(q(1, 4));
    assert_eq!(det_fraction_free(&minor).unwrap(), expect);
}

#[test]
fn block_product_equals_determinant_j_three_halves() {
    let m = build_reduced_matrix(3, &moment_table(&a_recurrence(3).unwrap())).unwrap();
    let blocks = block_diagonalize(&m).unwrap();
    let prod = blocks.iter().fold(MultiPolynomial::one(), |acc, b| &acc * b.determinant_polynomial().unwrap());
    assert_eq!(prod, m.determinant().unwrap());
}

#[test]
fn spectrum_from_five_determinants() {
    let rep = extract_spectrum(&det_sequence(5).unwrap()).unwrap();
    let expect: Vec<Rational> = (1..=4).map(|k| q(2 * k - 1, 2)).collect();
    assert_eq!(rep.certified_rationals().unwrap(), expect);
    assert_eq!(rep.resolution_bound, RealRoot::Exact { value: q(9, 2) });
}

#[test]
fn redundant_determinants_only_shrink_the_tail() {
    let d = det_sequence(6).unwrap();
    let mut last_bound = None;
    let mut last_cert: Vec<Rational> = Vec::new();
    for n in 1..=6 {
        let rep = extract_spectrum(&d[..n]).unwrap();
        let cert = rep.certified_rationals().unwrap();
        assert_eq!(&cert[..last_cert.len()], &last_cert[..]);
        let bound = rep.resolution_bound.exact().unwrap().clone();
        if let Some(b) = &last_bound {
            assert!(&bound > b);
        }
        assert!(matches!(rep.regions.last(), Some(FeasibleRegion::Interval { hi: None, .. })));
        last_bound = Some(bound);
        last_cert = cert;
    }
}
