mod common;

use common::{brute_elementary, random_matrix, Word};
use hrlab::linalg::CMat;
use hrlab::positivity::{
    elementary_symmetric, is_m_positive, is_m_positive_spectral, is_semipositive, random_hermitian,
    random_kahler, random_polarization, relative_spectrum, satisfies_theorem_hypotheses,
};
use hrlab::{Error, HermitianOneOneForm};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn indefinite_but_one_positive() {
    let a = HermitianOneOneForm::diag(&[1.0, 1.0, -0.5]);
    let w = HermitianOneOneForm::identity(3);
    assert!(is_m_positive(&a, &w, 1).unwrap().positive);
    assert!(!is_m_positive(&a, &w, 2).unwrap().positive);
    assert!(!is_semipositive(&a));
}

#[test]
fn wedge_values_are_normalized_symmetric_functions() {
    // α = diag(1,2,3) against ω = 1 on C^3: e_1/3 = 2, e_2/3 = 11/3, e_3 = 6
    let a = HermitianOneOneForm::diag(&[1.0, 2.0, 3.0]);
    let w = HermitianOneOneForm::identity(3);
    let v = is_m_positive(&a, &w, 3).unwrap().values;
    for (x, y) in v.iter().zip([2.0, 11.0 / 3.0, 6.0]) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn range_and_kahler_errors() {
    let a = HermitianOneOneForm::identity(2);
    assert!(matches!(is_m_positive(&a, &a, 0), Err(Error::Range(_))));
    assert!(matches!(is_m_positive(&a, &a, 3), Err(Error::Range(_))));
    let bad = HermitianOneOneForm::diag(&[1.0, 0.0]);
    assert!(matches!(
        is_m_positive(&a, &bad, 1),
        Err(Error::NotKahler(_))
    ));
    assert!(matches!(
        is_m_positive(&HermitianOneOneForm::identity(3), &a, 1),
        Err(Error::Dimension(_))
    ));
}

#[test]
fn unreachable_margin_gives_up() {
    // normalized e_2 on C^2 never exceeds 1
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = HermitianOneOneForm::identity(2);
    assert!(matches!(
        random_polarization(&w, 2, 2.0, &mut rng),
        Err(Error::Range(_))
    ));
}

#[test]
fn non_hermitian_matrix_rejected() {
    let m = CMat::from_fn(2, 2, |i, j| hrlab::linalg::c64((i + 2 * j) as f64, 0.0));
    assert!(HermitianOneOneForm::new(m).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_functions_match_subset_sums(values in prop::collection::vec(-3.0f64..3.0, 0..7)) {
        let e = elementary_symmetric(&values);
        for (k, ek) in e.iter().enumerate() {
            let b = brute_elementary(&values, k);
            prop_assert!((ek - b).abs() < 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn wedge_value_matches_oracle(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let w = random_kahler(n, &mut rng);
        let v = is_m_positive(&a, &w, n).unwrap().values;
        let (oa, ow) = (Word::from_hermitian(&a), Word::from_hermitian(&w));
        let top = ow.power(n).extract().re;
        for k in 1..=n {
            let o = oa.power(k).wedge(&ow.power(n - k)).extract().re / top;
            prop_assert!((v[k - 1] - o).abs() < 1e-9 * (1.0 + o.abs()));
        }
    }

    #[test]
    fn wedge_and_spectral_values_agree(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let w = random_kahler(n, &mut rng);
        for m in 1..=n {
            let x = is_m_positive(&a, &w, m).unwrap();
            let y = is_m_positive_spectral(&a, &w, m).unwrap();
            for (u, v) in x.values.iter().zip(&y.values) {
                prop_assert!((u - v).abs() < 1e-9 * (1.0 + u.abs()));
            }
            if x.margin.abs() > 1e-9 {
                prop_assert_eq!(x.positive, y.positive);
            }
        }
    }

    #[test]
    fn relative_spectrum_congruence_invariant(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let w = random_kahler(n, &mut rng);
        let g = random_matrix(n, n, &mut rng);
        let s1 = relative_spectrum(&a, &w).unwrap().eigenvalues;
        let s2 = relative_spectrum(&a.pullback(&g), &w.pullback(&g)).unwrap().eigenvalues;
        let scale = 1.0 + s1.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for (u, v) in s1.iter().zip(&s2) {
            prop_assert!((u - v).abs() < 1e-7 * scale);
        }
    }

    #[test]
    fn verdict_is_scale_invariant(n in 1usize..=5, seed in any::<u64>(), s in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(n, &mut rng);
        let w = random_kahler(n, &mut rng);
        let m = 1 + (seed as usize) % n;
        let x = is_m_positive(&a, &w, m).unwrap();
        let y = is_m_positive(&a.scale(s), &w, m).unwrap();
        prop_assert!((x.margin - y.margin).abs() < 1e-9 * (1.0 + x.margin.abs()));
    }

    #[test]
    fn semipositive_with_enough_rank_is_m_positive(n in 1usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_kahler(n, &mut rng);
        let m = 1 + (seed as usize) % n;
        let a = random_polarization(&w, m, 1e-6, &mut rng).unwrap();
        prop_assert!(is_semipositive(&a));
        prop_assert!(satisfies_theorem_hypotheses(&a, &w, m).unwrap());
        prop_assert!(is_m_positive(&a, &w, m).unwrap().positive);
        let e = relative_spectrum(&a, &w).unwrap().elementary_symmetric();
        prop_assert!(e[m] >= 1e-6 * (1.0 - 1e-9));
    }

    #[test]
    fn rank_deficient_form_is_not_m_positive(n in 2usize..=5, seed in any::<u64>()) {
        // B B† with B of width r < m has e_m = 0
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = 1 + (seed as usize) % (n - 1);
        let b = random_matrix(n, r, &mut rng);
        let a = HermitianOneOneForm::new((&b * &b.adjoint()).hermitian_part()).unwrap();
        let w = HermitianOneOneForm::identity(n);
        prop_assert!(!satisfies_theorem_hypotheses(&a, &w, r + 1).unwrap());
        prop_assert!(!is_m_positive(&a, &w, r + 1).unwrap().positive);
        prop_assert!(is_m_positive(&a, &w, r).unwrap().positive);
    }
}
