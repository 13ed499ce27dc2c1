//! Constant-coefficient `(p, q)`-forms on `C^n`.
//!
//! A form is stored densely over the canonical basis `dz_I ∧ dz̄_J`, with `I`
//! and `J` strictly increasing and every `dz` factor written before every
//! `dz̄` factor. Slots are ordered lexicographically by `(I, J)`; this is the
//! ordering every matrix in the crate uses.
//!
//! Bidegrees above `n` are allowed and denote the zero space, so products that
//! overflow the top degree vanish without special casing at call sites.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `i^k` for any integer exponent.
pub fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => I_UNIT,
        2 => -ONE,
        _ => -I_UNIT,
    }
}

/// A strictly increasing set of coordinate indices, kept as a bit set.
///
/// Bit `j` stands for the 1-based coordinate `j + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds from 1-based indices, which must be strictly increasing and
    /// lie in `1..=n`.
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        let mut bits = 0u32;
        let mut prev = 0usize;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::Range(format!("index {i} outside 1..={n}")));
            }
            if i <= prev {
                return Err(Error::Range(format!(
                    "multi-index {indices:?} is not strictly increasing"
                )));
            }
            prev = i;
            bits |= 1 << (i - 1);
        }
        Ok(MultiIndex(bits))
    }

    #[inline]
    pub fn from_bits(bits: u32) -> Self {
        MultiIndex(bits)
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// 1-based indices in increasing order.
    pub fn to_vec(self) -> Vec<usize> {
        (0..32)
            .filter(|j| self.0 & (1 << j) != 0)
            .map(|j| j + 1)
            .collect()
    }

    pub fn contains(self, one_based: usize) -> bool {
        one_based >= 1 && self.0 & (1 << (one_based - 1)) != 0
    }

    /// Lexicographic rank among the `k`-subsets of `{1..n}`.
    pub fn rank(self, n: usize) -> usize {
        let k = self.len();
        let mut sub = 0;
        let mut i = 1;
        for j in 0..n {
            if self.0 & (1 << j) != 0 {
                sub += binomial(n - 1 - j, k - i + 1);
                i += 1;
            }
        }
        binomial(n, k) - 1 - sub
    }

    /// All `k`-subsets of `{1..n}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(binomial(n, k));
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(MultiIndex(idx.iter().fold(0, |b, &j| b | (1 << j))));
            // rightmost position that can still advance
            let Some(pos) = (0..k).rev().find(|&t| idx[t] < n - k + t) else {
                return out;
            };
            idx[pos] += 1;
            for t in pos + 1..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}

/// Sign of the permutation that sorts the concatenation `a ++ b` of two
/// disjoint increasing index sets.
#[inline]
fn merge_sign(a: u32, b: u32) -> f64 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// A constant-coefficient `(p, q)`-form on `C^n`.
#[derive(Clone, PartialEq)]
pub struct Form {
    n: usize,
    p: usize,
    q: usize,
    coeffs: Vec<Complex64>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(n={}, ({}, {})) {{", self.n, self.p, self.q)?;
        for (i, j, z) in self.terms() {
            write!(f, " {:?}{:?}: {:.6}{:+.6}i,", i, j, z.re, z.im)?;
        }
        write!(f, " }}")
    }
}

impl Form {
    pub fn zero(n: usize, p: usize, q: usize) -> Self {
        Form {
            n,
            p,
            q,
            coeffs: vec![ZERO; binomial(n, p) * binomial(n, q)],
        }
    }

    /// The constant `(0, 0)`-form `z`.
    pub fn scalar(n: usize, z: Complex64) -> Self {
        Form {
            n,
            p: 0,
            q: 0,
            coeffs: vec![z],
        }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, ONE)
    }

    /// `z · dz_I ∧ dz̄_J`.
    pub fn monomial(n: usize, i: MultiIndex, j: MultiIndex, z: Complex64) -> Self {
        let mut f = Self::zero(n, i.len(), j.len());
        f.set(i, j, z);
        f
    }

    /// `dz_j`, 1-based.
    pub fn dz(n: usize, j: usize) -> Self {
        Self::monomial(
            n,
            MultiIndex::from_bits(1 << (j - 1)),
            MultiIndex::EMPTY,
            ONE,
        )
    }

    /// `dz̄_j`, 1-based.
    pub fn dzbar(n: usize, j: usize) -> Self {
        Self::monomial(
            n,
            MultiIndex::EMPTY,
            MultiIndex::from_bits(1 << (j - 1)),
            ONE,
        )
    }

    /// Builds a form from its coefficient vector in canonical slot order.
    pub fn from_coeffs(n: usize, p: usize, q: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let want = binomial(n, p) * binomial(n, q);
        if coeffs.len() != want {
            return Err(Error::Dimension(format!(
                "({p},{q})-forms on C^{n} have {want} slots, got {}",
                coeffs.len()
            )));
        }
        Ok(Form { n, p, q, coeffs })
    }

    /// The reference volume `Γ = ∧_j (i dz_j ∧ dz̄_j)`.
    pub fn volume(n: usize) -> Self {
        let top = MultiIndex::from_bits(((1u64 << n) - 1) as u32);
        Self::monomial(n, top, top, volume_factor(n))
    }

    /// `ω = i Σ_j dz_j ∧ dz̄_j`.
    pub fn standard_kahler(n: usize) -> Self {
        let mut f = Self::zero(n, 1, 1);
        for j in 0..n {
            let m = MultiIndex::from_bits(1 << j);
            f.set(m, m, I_UNIT);
        }
        f
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn degree(&self) -> usize {
        self.p + self.q
    }

    /// Number of basis slots, `C(n,p)·C(n,q)`.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    #[inline]
    fn slot(&self, i: MultiIndex, j: MultiIndex) -> usize {
        i.rank(self.n) * binomial(self.n, self.q) + j.rank(self.n)
    }

    pub fn get(&self, i: MultiIndex, j: MultiIndex) -> Complex64 {
        assert!(
            i.len() == self.p && j.len() == self.q,
            "multi-index lengths"
        );
        self.coeffs[self.slot(i, j)]
    }

    pub fn set(&mut self, i: MultiIndex, j: MultiIndex, z: Complex64) {
        assert!(
            i.len() == self.p && j.len() == self.q,
            "multi-index lengths"
        );
        let s = self.slot(i, j);
        self.coeffs[s] = z;
    }

    /// Nonzero terms `(I, J, coefficient)` in slot order.
    pub fn terms(&self) -> Vec<(MultiIndex, MultiIndex, Complex64)> {
        if self.coeffs.is_empty() {
            return Vec::new();
        }
        let is = MultiIndex::all(self.n, self.p);
        let js = MultiIndex::all(self.n, self.q);
        let nj = js.len();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
            .map(|(s, &z)| (is[s / nj], js[s % nj], z))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, z: Complex64) -> Form {
        Form {
            coeffs: self.coeffs.iter().map(|c| c * z).collect(),
            ..*self
        }
    }

    pub fn scale_real(&self, s: f64) -> Form {
        self.scale(Complex64::new(s, 0.0))
    }

    fn same_shape(&self, other: &Form) -> Result<()> {
        if (self.n, self.p, self.q) != (other.n, other.p, other.q) {
            return Err(Error::Dimension(format!(
                "forms of shape (n={}, {}, {}) and (n={}, {}, {})",
                self.n, self.p, self.q, other.n, other.p, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.same_shape(other)?;
        Ok(Form {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            ..*self
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.same_shape(other)?;
        Ok(Form {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            ..*self
        })
    }

    /// Exterior product. Panics if the ambient dimensions differ; use the
    /// free function [`wedge`] for a checked version.
    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "wedge of forms on different spaces");
        let n = self.n;
        let (p, q) = (self.p + other.p, self.q + other.q);
        let mut out = Form::zero(n, p, q);
        if out.coeffs.is_empty() {
            return out;
        }
        let lhs = self.terms();
        let rhs = other.terms();
        let nq = binomial(n, q);
        // moving dz_K of the right factor past dz̄_J of the left factor
        let swap = if (self.q * other.p).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        for &(i1, j1, a) in &lhs {
            for &(i2, j2, b) in &rhs {
                if i1.bits() & i2.bits() != 0 || j1.bits() & j2.bits() != 0 {
                    continue;
                }
                let sign =
                    swap * merge_sign(i1.bits(), i2.bits()) * merge_sign(j1.bits(), j2.bits());
                let i = MultiIndex::from_bits(i1.bits() | i2.bits());
                let j = MultiIndex::from_bits(j1.bits() | j2.bits());
                out.coeffs[i.rank(n) * nq + j.rank(n)] += a * b * sign;
            }
        }
        out
    }

    /// Matrix of `Φ ↦ self ∧ Φ` from `Λ^{p,q}` to `Λ^{p+a, q+b}` in canonical
    /// slot order, `(a, b)` being the bidegree of `self`.
    pub fn wedge_operator(&self, p: usize, q: usize) -> CMat {
        let basis = basis_of(self.n, p, q);
        let columns: Vec<Vec<Complex64>> =
            basis.iter().map(|e| self.wedge(e).into_coeffs()).collect();
        let rows = binomial(self.n, self.p + p) * binomial(self.n, self.q + q);
        CMat::from_columns(rows, &columns)
    }

    /// `self^k` (`k = 0` gives the constant 1).
    pub fn power(&self, k: usize) -> Form {
        let mut acc = Form::one(self.n);
        for _ in 0..k {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Complex conjugate, a `(q, p)`-form.
    pub fn conjugate(&self) -> Form {
        let mut out = Form::zero(self.n, self.q, self.p);
        // conj(dz_I ∧ dz̄_J) = dz̄_I ∧ dz_J = (-1)^{|I||J|} dz_J ∧ dz̄_I
        let sign = if (self.p * self.q).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        for (i, j, z) in self.terms() {
            out.set(j, i, z.conj() * sign);
        }
        out
    }

    /// The scalar `λ` with `self = λ Γ`; requires bidegree `(n, n)`.
    pub fn extract(&self) -> Result<Complex64> {
        if self.p != self.n || self.q != self.n {
            return Err(Error::Degree(format!(
                "extract needs an ({n},{n})-form, got ({}, {})",
                self.p,
                self.q,
                n = self.n
            )));
        }
        Ok(self.coeffs[0] / volume_factor(self.n))
    }

    /// `⟨self, other⟩ = Σ self_IJ conj(other_IJ)`.
    pub fn inner(&self, other: &Form) -> Result<Complex64> {
        self.same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }
}

/// Coefficient of `Γ` on the canonical top slot `dz_{1..n} ∧ dz̄_{1..n}`:
/// `i^n (-1)^{n(n-1)/2}`.
fn volume_factor(n: usize) -> Complex64 {
    let sign = if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    i_pow(n as i64) * sign
}

/// Checked exterior product.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    if a.n != b.n {
        return Err(Error::Dimension(format!(
            "wedge of forms on C^{} and C^{}",
            a.n, b.n
        )));
    }
    Ok(a.wedge(b))
}

pub fn conjugate(a: &Form) -> Form {
    a.conjugate()
}

pub fn extract(a: &Form) -> Result<Complex64> {
    a.extract()
}

pub fn inner_product(a: &Form, b: &Form) -> Result<Complex64> {
    a.inner(b)
}

/// Unit basis of `Λ^{p,q}(C^n)` in canonical slot order.
pub fn basis_of(n: usize, p: usize, q: usize) -> Vec<Form> {
    let mut out = Vec::new();
    for i in MultiIndex::all(n, p) {
        for j in MultiIndex::all(n, q) {
            out.push(Form::monomial(n, i, j, ONE));
        }
    }
    out
}

/// Wedge product of a sequence of forms on `C^n`; the empty product is 1.
pub fn wedge_all<'a>(n: usize, forms: impl IntoIterator<Item = &'a Form>) -> Form {
    forms.into_iter().fold(Form::one(n), |acc, f| acc.wedge(f))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(rename = "I")]
    i: Vec<usize>,
    #[serde(rename = "J")]
    j: Vec<usize>,
    re: f64,
    im: f64,
}

/// Wire form: `{"n", "p", "q", "terms": [{"I", "J", "re", "im"}]}` with
/// 1-based, strictly increasing `I` and `J`.
#[derive(Serialize, Deserialize)]
pub struct FormJson {
    n: usize,
    p: usize,
    q: usize,
    terms: Vec<TermJson>,
}

impl From<&Form> for FormJson {
    fn from(f: &Form) -> Self {
        FormJson {
            n: f.n,
            p: f.p,
            q: f.q,
            terms: f
                .terms()
                .into_iter()
                .map(|(i, j, z)| TermJson {
                    i: i.to_vec(),
                    j: j.to_vec(),
                    re: z.re,
                    im: z.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<FormJson> for Form {
    type Error = Error;

    fn try_from(js: FormJson) -> Result<Form> {
        if js.n == 0 || js.n > 16 {
            return Err(Error::Range(format!("dimension {} outside 1..=16", js.n)));
        }
        let mut f = Form::zero(js.n, js.p, js.q);
        for t in js.terms {
            let i = MultiIndex::new(&t.i, js.n)?;
            let j = MultiIndex::new(&t.j, js.n)?;
            if i.len() != js.p || j.len() != js.q {
                return Err(Error::Degree(format!(
                    "term {:?}/{:?} does not have bidegree ({}, {})",
                    t.i, t.j, js.p, js.q
                )));
            }
            let s = f.slot(i, j);
            f.coeffs[s] += Complex64::new(t.re, t.im);
        }
        Ok(f)
    }
}

impl Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let js = FormJson::deserialize(d)?;
        Form::try_from(js).map_err(serde::de::Error::custom)
    }
}
