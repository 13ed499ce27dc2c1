//! Hand-written linear algebra against nalgebra.

use hrlab::linalg::{
    cholesky, hermitian_eigen, hermitian_eigenvalues, inertia, lower_triangular_inverse,
    orthonormalize, svd, CMat,
};
use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn random(r: usize, c: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMat::from_fn(r, c, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex::new(re, im)
    })
}

fn to_na(a: &CMat) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Rank-deficient `r x c` matrix of rank at most `k`.
fn low_rank(r: usize, c: usize, k: usize, seed: u64) -> CMat {
    &random(r, k, seed) * &random(k, c, seed ^ 0xff)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalues_match(n in 1usize..=24, seed in any::<u64>()) {
        let a = random(n, n, seed).hermitian_part();
        let mut want: Vec<f64> = to_na(&a).symmetric_eigenvalues().iter().copied().collect();
        want.sort_by(f64::total_cmp);
        let jac = hermitian_eigen(&a);
        let ql = hermitian_eigenvalues(&a);
        let scale = 1.0 + want.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for i in 0..n {
            prop_assert!((jac.values[i] - want[i]).abs() < 1e-10 * scale);
            prop_assert!((ql[i] - want[i]).abs() < 1e-10 * scale);
        }
        // A V = V Λ with V unitary
        let v = &jac.vectors;
        prop_assert!((&(&v.adjoint() * v) - &CMat::identity(n)).max_abs() < 1e-10);
        let av = &a * v;
        for j in 0..n {
            for i in 0..n {
                prop_assert!((av[(i, j)] - v[(i, j)] * jac.values[j]).norm() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn singular_values_match(r in 1usize..=16, c in 1usize..=16, k in 1usize..=16, seed in any::<u64>()) {
        let a = low_rank(r, c, k, seed);
        let mut want: Vec<f64> = to_na(&a).singular_values().iter().copied().collect();
        want.sort_by(|x, y| y.total_cmp(x));
        let s = svd(&a);
        let top = want[0].max(1.0);
        for (x, y) in s.values.iter().zip(&want) {
            prop_assert!((x - y).abs() < 1e-10 * top);
        }
        let rank = s.rank(1e-10);
        prop_assert_eq!(rank, k.min(r).min(c));
        let ker = s.kernel(1e-10);
        prop_assert_eq!(ker.cols(), c - rank);
        prop_assert!((&a * &ker).max_abs() < 1e-9 * top);
        prop_assert!((&(&s.v.adjoint() * &s.v) - &CMat::identity(c)).max_abs() < 1e-10);
    }

    #[test]
    fn cholesky_factors(n in 1usize..=12, seed in any::<u64>()) {
        let b = random(n, n, seed);
        let a = (&(&b * &b.adjoint()) + &CMat::identity(n)).hermitian_part();
        let l = cholesky(&a).unwrap();
        prop_assert!((&(&l * &l.adjoint()) - &a).max_abs() < 1e-10 * a.max_abs());
        let li = lower_triangular_inverse(&l);
        prop_assert!((&(&li * &l) - &CMat::identity(n)).max_abs() < 1e-9);
        let na = to_na(&a).cholesky().unwrap().l();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((l[(i, j)] - na[(i, j)]).norm() < 1e-9 * (1.0 + a.max_abs()));
            }
        }
    }

    #[test]
    fn orthonormalize_spans(n in 1usize..=10, k in 1usize..=10, seed in any::<u64>()) {
        let a = random(n, k, seed);
        let q = orthonormalize(&a.columns(), 1e-10);
        prop_assert_eq!(q.len(), k.min(n));
        let qm = CMat::from_columns(n, &q);
        prop_assert!((&(&qm.adjoint() * &qm) - &CMat::identity(q.len())).max_abs() < 1e-12);
    }
}

#[test]
fn indefinite_has_no_cholesky() {
    let a = CMat::from_real_diag(&[1.0, -1.0]);
    assert!(cholesky(&a).is_none());
    assert_eq!(inertia(&[3.0, -1.0, 1e-14], 1e-10), (1, 1, 1));
}
