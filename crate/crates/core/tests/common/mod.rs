//! Word-expansion model of the exterior algebra, used as an oracle.
//!
//! Generators on `C^n` are numbered `1..=n` for `dz_j` and `n+1..=2n` for
//! `dz̄_j`. A term is a word over generators; products concatenate words and
//! a canonical term is the sorted word with the sign of the sorting
//! permutation.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hrlab::linalg::CMat;
use hrlab::{Form, HermitianOneOneForm, MultiIndex};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

#[derive(Debug, Clone)]
pub struct Word {
    pub n: usize,
    pub terms: BTreeMap<Vec<usize>, Complex64>,
}

/// Sorts by adjacent transpositions; `None` when a generator repeats.
fn canon(mut w: Vec<usize>) -> Option<(Vec<usize>, f64)> {
    let mut sign = 1.0;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

impl Word {
    pub fn zero(n: usize) -> Self {
        Word {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::term(n, vec![], Complex64::new(1.0, 0.0))
    }

    pub fn term(n: usize, w: Vec<usize>, z: Complex64) -> Self {
        let mut out = Self::zero(n);
        out.push(w, z);
        out
    }

    pub fn dz(n: usize, j: usize) -> Self {
        Self::term(n, vec![j], Complex64::new(1.0, 0.0))
    }

    pub fn dzbar(n: usize, j: usize) -> Self {
        Self::term(n, vec![n + j], Complex64::new(1.0, 0.0))
    }

    fn push(&mut self, w: Vec<usize>, z: Complex64) {
        if let Some((w, s)) = canon(w) {
            *self.terms.entry(w).or_insert(Complex64::new(0.0, 0.0)) += z * s;
        }
    }

    pub fn add(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for (w, z) in &other.terms {
            out.push(w.clone(), *z);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Word {
        let mut out = self.clone();
        for z in out.terms.values_mut() {
            *z *= s;
        }
        out
    }

    pub fn wedge(&self, other: &Word) -> Word {
        let mut out = Word::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.push(w, x * y);
            }
        }
        out
    }

    pub fn power(&self, k: usize) -> Word {
        (0..k).fold(Word::one(self.n), |acc, _| acc.wedge(self))
    }

    /// Swaps each `dz_j` with `dz̄_j` and conjugates coefficients.
    pub fn conjugate(&self) -> Word {
        let n = self.n;
        let mut out = Word::zero(n);
        for (w, z) in &self.terms {
            let sw = w
                .iter()
                .map(|&g| if g <= n { g + n } else { g - n })
                .collect();
            out.push(sw, z.conj());
        }
        out
    }

    pub fn gamma(n: usize) -> Word {
        let i = Complex64::new(0.0, 1.0);
        (1..=n).fold(Word::one(n), |acc, j| {
            acc.wedge(&Word::dz(n, j).wedge(&Word::dzbar(n, j)).scale(i))
        })
    }

    /// Top coefficient relative to `Γ = Π_j (i dz_j ∧ dz̄_j)`.
    pub fn extract(&self) -> Complex64 {
        let top: Vec<usize> = (1..=2 * self.n).collect();
        let g = Word::gamma(self.n).terms[&top];
        let c = self
            .terms
            .get(&top)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0));
        c / g
    }

    pub fn from_form(f: &Form) -> Word {
        let n = f.n();
        let mut out = Word::zero(n);
        for (i, j, z) in f.terms() {
            let mut w = i.to_vec();
            w.extend(j.to_vec().into_iter().map(|x| x + n));
            out.push(w, z);
        }
        out
    }

    pub fn from_hermitian(a: &HermitianOneOneForm) -> Word {
        let n = a.n();
        let mut out = Word::zero(n);
        for j in 0..n {
            for k in 0..n {
                out.push(vec![j + 1, n + k + 1], Complex64::i() * a.matrix()[(j, k)]);
            }
        }
        out
    }

    /// Dense coefficients in bidegree `(p, q)`, slot order `(I, J)`.
    pub fn to_form(&self, p: usize, q: usize) -> Form {
        let n = self.n;
        let mut f = Form::zero(n, p, q);
        for (w, z) in &self.terms {
            let hol: Vec<usize> = w.iter().copied().filter(|&g| g <= n).collect();
            let anti: Vec<usize> = w.iter().filter(|&&g| g > n).map(|g| g - n).collect();
            assert_eq!((hol.len(), anti.len()), (p, q), "bidegree mismatch");
            f.set(
                MultiIndex::new(&hol, n).unwrap(),
                MultiIndex::new(&anti, n).unwrap(),
                *z,
            );
        }
        f
    }

    /// Substitutes `dz_i = Σ_k M_ik du_k` and `dz̄_i = Σ_k conj(M_ik) dū_k`
    /// factor by factor.
    pub fn pullback(&self, m: &CMat) -> Word {
        let (n, n2) = (self.n, m.cols());
        let mut out = Word::zero(n2);
        for (w, z) in &self.terms {
            let mut acc = Word::term(n2, vec![], *z);
            for &g in w {
                let mut one = Word::zero(n2);
                for k in 0..n2 {
                    if g <= n {
                        one.push(vec![k + 1], m[(g - 1, k)]);
                    } else {
                        one.push(vec![n2 + k + 1], m[(g - n - 1, k)].conj());
                    }
                }
                acc = acc.wedge(&one);
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn max_diff(&self, f: &Form) -> f64 {
        let g = Word::from_form(f);
        let mut keys: Vec<&Vec<usize>> = self.terms.keys().collect();
        keys.extend(g.terms.keys());
        keys.into_iter()
            .map(|k| {
                let a = self.terms.get(k).copied().unwrap_or_default();
                let b = g.terms.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Determinant by permutation expansion.
pub fn leibniz_det(a: &[Vec<Complex64>]) -> Complex64 {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    permute(&mut perm, 0, a, &mut total);
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, a: &[Vec<Complex64>], total: &mut Complex64) {
    let n = perm.len();
    if k == n {
        let inv = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let s = if inv % 2 == 0 { 1.0 } else { -1.0 };
        let prod = (0..n).fold(Complex64::new(s, 0.0), |acc, i| acc * a[i][perm[i]]);
        *total += prod;
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, a, total);
        perm.swap(k, i);
    }
}

/// `e_k` by summing products over all `k`-subsets.
pub fn brute_elementary(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| {
            (0..n)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| values[i])
                .product::<f64>()
        })
        .sum()
}

pub fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn random_form<R: Rng + ?Sized>(n: usize, p: usize, q: usize, rng: &mut R) -> Form {
    let dim = Form::zero(n, p, q).dim();
    Form::from_coeffs(n, p, q, (0..dim).map(|_| gaussian_c(rng)).collect()).unwrap()
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| gaussian_c(rng)).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(r: usize, c: usize, rng: &mut R) -> CMat {
    CMat::from_fn(r, c, |_, _| gaussian_c(rng))
}
