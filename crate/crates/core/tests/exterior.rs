mod common;

use common::{random_form, Word};
use hrlab::exterior::binomial;
use hrlab::{basis_of, Form, HermitianOneOneForm, MultiIndex};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

#[test]
fn kahler_power_extracts_to_factorial() {
    for n in 1..=5 {
        let w = Form::standard_kahler(n);
        let v = w.power(n).extract().unwrap();
        let oracle = Word::from_form(&w).power(n).extract();
        assert!((oracle.re - factorial(n)).abs() < 1e-12 * factorial(n));
        assert!((v - Complex64::new(factorial(n), 0.0)).norm() < 1e-12 * factorial(n));
    }
}

#[test]
fn gamma_matches_volume() {
    for n in 1..=4 {
        let g = Word::gamma(n);
        assert!(g.max_diff(&Form::volume(n)) < 1e-15);
    }
}

#[test]
fn ordered_top_monomials() {
    // frozen from the word oracle
    let top = MultiIndex::from_bits(0b11);
    let f = Form::monomial(2, top, top, Complex64::new(1.0, 0.0));
    let v = f.extract().unwrap();
    assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    let f3 = Form::monomial(
        3,
        MultiIndex::from_bits(0b111),
        MultiIndex::from_bits(0b111),
        Complex64::new(1.0, 0.0),
    );
    assert!((f3.extract().unwrap() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    assert!((Word::from_form(&f3).extract() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn bidegree_overflow_is_zero_space() {
    let a = Form::dz(2, 1).wedge(&Form::dz(2, 2));
    let b = a.wedge(&Form::dz(2, 1));
    assert_eq!(b.bidegree(), (3, 0));
    assert_eq!(b.dim(), 0);
    assert!(b.is_zero());
}

#[test]
fn basis_sizes() {
    for n in 1..=5 {
        for p in 0..=n {
            for q in 0..=n {
                assert_eq!(basis_of(n, p, q).len(), binomial(n, p) * binomial(n, q));
            }
        }
    }
}

#[test]
fn extract_rejects_lower_degree() {
    assert!(Form::standard_kahler(3).extract().is_err());
}

fn small_bidegree() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), 0..=n, 0..=n, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_matches_oracle(
        (n, p, q, seed) in small_bidegree(),
        r in 0usize..=2, s in 0usize..=2,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        let b = random_form(n, r.min(n), s.min(n), &mut rng);
        let fast = a.wedge(&b);
        let slow = Word::from_form(&a).wedge(&Word::from_form(&b));
        prop_assert!(slow.max_diff(&fast) < TOL * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn conjugate_matches_oracle((n, p, q, seed) in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        prop_assert!(Word::from_form(&a).conjugate().max_diff(&a.conjugate()) < 1e-14 * (1.0 + a.norm()));
    }

    #[test]
    fn extract_matches_oracle(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, n, n, &mut rng);
        let d = (a.extract().unwrap() - Word::from_form(&a).extract()).norm();
        prop_assert!(d < 1e-14 * (1.0 + a.norm()));
    }

    #[test]
    fn wedge_is_associative((n, p, q, seed) in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        let b = random_form(n, 1, 0, &mut rng);
        let c = random_form(n, 0, 1.min(n), &mut rng);
        let l = a.wedge(&b).wedge(&c);
        let r = a.wedge(&b.wedge(&c));
        let scale = 1.0 + a.norm() * b.norm() * c.norm();
        prop_assert!(l.sub(&r).unwrap().max_abs() < TOL * scale);
    }

    #[test]
    fn wedge_is_graded_commutative(
        (n, p, q, seed) in small_bidegree(),
        r in 0usize..=2, s in 0usize..=2,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        let b = random_form(n, r.min(n), s.min(n), &mut rng);
        let sign = if a.degree() * b.degree() % 2 == 0 { 1.0 } else { -1.0 };
        let d = a.wedge(&b).sub(&b.wedge(&a).scale_real(sign)).unwrap();
        prop_assert!(d.max_abs() < TOL * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn conjugation_is_an_involution((n, p, q, seed) in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn conjugation_is_multiplicative((n, p, q, seed) in small_bidegree(), r in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        let b = random_form(n, r.min(n), 1, &mut rng);
        let l = a.wedge(&b).conjugate();
        let rr = a.conjugate().wedge(&b.conjugate());
        prop_assert!(l.sub(&rr).unwrap().max_abs() < TOL * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn real_forms_have_real_top_products(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let forms: Vec<Form> = (0..n)
            .map(|_| hrlab::positivity::random_hermitian(n, &mut rng).to_form())
            .collect();
        let top = forms.iter().skip(1).fold(forms[0].clone(), |acc, f| acc.wedge(f));
        let v = top.extract().unwrap();
        prop_assert!(v.im.abs() < 1e-10 * (1.0 + v.norm()));
        // a real (1,1)-form equals its conjugate
        prop_assert!(forms[0].sub(&forms[0].conjugate()).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn hermitian_form_roundtrip(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = hrlab::positivity::random_hermitian(n, &mut rng);
        let b = HermitianOneOneForm::from_form(&a.to_form()).unwrap();
        prop_assert!((a.matrix() - b.matrix()).max_abs() < 1e-15);
        prop_assert!(Word::from_hermitian(&a).max_diff(&a.to_form()) < 1e-15);
    }

    #[test]
    fn json_roundtrip((n, p, q, seed) in small_bidegree()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_form(n, p, q, &mut rng);
        let text = serde_json::to_string(&a).unwrap();
        let b: Form = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(a, b);
    }
}
