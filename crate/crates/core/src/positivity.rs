//! Real `(1,1)`-forms as Hermitian matrices, and their positivity cones.
//!
//! `α = i Σ A_jk dz_j ∧ dz̄_k` is stored as the Hermitian matrix `A`. Whether
//! `α` is `m`-positive with respect to a Kähler form `ω` is decided two
//! ways that share nothing but the final threshold: by the signs of the
//! mixed volumes `α^k ∧ ω^{n-k} / Γ` computed in the exterior algebra, and by
//! the elementary symmetric functions of the eigenvalues of `α` relative to
//! `ω`. The two agree because `α^k ∧ ω^{n-k} / ω^n = e_k(λ) / C(n, k)`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, Form, MultiIndex};
use crate::linalg::{cholesky, hermitian_eigen, lower_triangular_inverse, CMat};

/// Relative threshold above which a quantity counts as strictly positive.
pub const POSITIVITY_EPS: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;

/// A real `(1,1)`-form `i Σ A_jk dz_j ∧ dz̄_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOneOneForm {
    matrix: CMat,
}

impl HermitianOneOneForm {
    /// Accepts a square matrix that is Hermitian up to `1e-12` relative, and
    /// stores its Hermitian part.
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Dimension(format!(
                "expected a non-empty square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermitian_defect();
        if defect > HERMITIAN_TOL * matrix.max_abs().max(1.0) {
            return Err(Error::InvalidInstance(format!(
                "matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(HermitianOneOneForm {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn identity(n: usize) -> Self {
        HermitianOneOneForm {
            matrix: CMat::identity(n),
        }
    }

    pub fn diag(d: &[f64]) -> Self {
        HermitianOneOneForm {
            matrix: CMat::from_real_diag(d),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOneOneForm {
            matrix: self.matrix.scale_real(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianOneOneForm {
            matrix: &self.matrix + &other.matrix,
        }
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        self.scale(1.0 - t).add(&other.scale(t))
    }

    /// `i dH ∧ dH̄` for `H(z) = v·z`, i.e. the matrix `v v†`.
    pub fn from_covector(v: &[Complex64]) -> Self {
        HermitianOneOneForm {
            matrix: CMat::from_fn(v.len(), v.len(), |j, k| v[j] * v[k].conj()),
        }
    }

    pub fn to_form(&self) -> Form {
        let n = self.n();
        let mut f = Form::zero(n, 1, 1);
        for j in 0..n {
            for k in 0..n {
                f.set(
                    MultiIndex::from_bits(1 << j),
                    MultiIndex::from_bits(1 << k),
                    Complex64::i() * self.matrix[(j, k)],
                );
            }
        }
        f
    }

    /// Inverse of [`to_form`](Self::to_form); the form must be a real `(1,1)`-form.
    pub fn from_form(f: &Form) -> Result<Self> {
        if f.bidegree() != (1, 1) {
            return Err(Error::Degree(format!(
                "expected a (1,1)-form, got {:?}",
                f.bidegree()
            )));
        }
        let n = f.n();
        let m = CMat::from_fn(n, n, |j, k| {
            f.get(MultiIndex::from_bits(1 << j), MultiIndex::from_bits(1 << k)) / Complex64::i()
        });
        Self::new(m)
    }

    /// Pullback along the linear map `z = M u`, `M` of shape `n x n'`:
    /// the matrix `Mᵀ A M̄`.
    pub fn pullback(&self, m: &CMat) -> Self {
        assert_eq!(m.rows(), self.n());
        let a = &(&m.transpose() * &self.matrix) * &m.conj();
        HermitianOneOneForm {
            matrix: a.hermitian_part(),
        }
    }

    /// Ordinary eigenvalues of the matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).values
    }

    /// Scale used by the matrix thresholds: the spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        hermitian_eigen(&self.matrix).spectral_radius()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

impl Serialize for HermitianOneOneForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n();
        MatrixJson {
            n,
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianOneOneForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let js = MatrixJson::deserialize(d)?;
        if js.rows.len() != js.n || js.rows.iter().any(|r| r.len() != js.n) {
            return Err(D::Error::custom(format!(
                "matrix rows do not form an {0}x{0} array",
                js.n
            )));
        }
        let m = CMat::from_fn(js.n, js.n, |i, j| {
            Complex64::new(js.rows[i][j][0], js.rows[i][j][1])
        });
        HermitianOneOneForm::new(m).map_err(D::Error::custom)
    }
}

/// Eigenvalues of `α` relative to `ω`, descending.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeSpectrum {
    pub eigenvalues: Vec<f64>,
}

impl RelativeSpectrum {
    /// `e_0, …, e_n` of the eigenvalues.
    pub fn elementary_symmetric(&self) -> Vec<f64> {
        elementary_symmetric(&self.eigenvalues)
    }

    /// Number of eigenvalues above `rel_tol` times the largest magnitude.
    pub fn positive_count(&self, rel_tol: f64) -> usize {
        let scale = self.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
        self.eigenvalues
            .iter()
            .filter(|&&v| v > rel_tol * scale && v > 0.0)
            .count()
    }
}

/// `e_0, …, e_n` of a list of numbers.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (i, &x) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += e[k - 1] * x;
        }
    }
    e
}

fn kahler_factor(omega: &HermitianOneOneForm) -> Result<CMat> {
    cholesky(omega.matrix())
        .ok_or_else(|| Error::NotKahler("reference form has a non-positive Cholesky pivot".into()))
}

pub fn check_kahler(omega: &HermitianOneOneForm) -> Result<()> {
    kahler_factor(omega).map(|_| ())
}

/// Solves `det(α - λ ω) = 0` by reducing `ω = L L†` to the identity and
/// diagonalizing `L⁻¹ A L⁻†`.
pub fn relative_spectrum(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
) -> Result<RelativeSpectrum> {
    if alpha.n() != omega.n() {
        return Err(Error::Dimension(format!(
            "α on C^{} against ω on C^{}",
            alpha.n(),
            omega.n()
        )));
    }
    let l = kahler_factor(omega)?;
    let li = lower_triangular_inverse(&l);
    let reduced = &(&li * alpha.matrix()) * &li.adjoint();
    let mut eigenvalues = hermitian_eigen(&reduced).values;
    eigenvalues.reverse();
    Ok(RelativeSpectrum { eigenvalues })
}

/// Outcome of an `m`-positivity test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityVerdict {
    pub positive: bool,
    /// `min_k` of the scale-free values `(α^k ∧ ω^{n-k} / ω^n) / ρ^k`.
    pub margin: f64,
    /// `α^k ∧ ω^{n-k} / ω^n` for `k = 1..=m`.
    pub values: Vec<f64>,
}

/// Homogeneous degree-one size of `α` measured against `ω`:
/// `n ‖A‖_F / tr W`.
fn relative_scale(alpha: &HermitianOneOneForm, omega: &HermitianOneOneForm) -> f64 {
    alpha.n() as f64 * alpha.matrix().frobenius_norm() / omega.matrix().trace().re
}

fn verdict(values: Vec<f64>, rho: f64) -> PositivityVerdict {
    if rho == 0.0 {
        return PositivityVerdict {
            positive: false,
            margin: 0.0,
            values,
        };
    }
    let margin = values
        .iter()
        .enumerate()
        .map(|(i, v)| v / rho.powi(i as i32 + 1))
        .fold(f64::INFINITY, f64::min);
    PositivityVerdict {
        positive: margin > POSITIVITY_EPS,
        margin,
        values,
    }
}

fn check_m(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::Range(format!("m = {m} outside 1..={n}")));
    }
    Ok(())
}

/// `m`-positivity through the signs of `α^k ∧ ω^{n-k}`, `k = 1..=m`.
pub fn is_m_positive(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    m: usize,
) -> Result<PositivityVerdict> {
    let n = omega.n();
    if alpha.n() != n {
        return Err(Error::Dimension("α and ω live on different spaces".into()));
    }
    check_m(m, n)?;
    check_kahler(omega)?;
    let a = alpha.to_form();
    let w = omega.to_form();
    let top = w.power(n).extract()?.re;
    let mut values = Vec::with_capacity(m);
    let mut a_pow = Form::one(n);
    for k in 1..=m {
        a_pow = a_pow.wedge(&a);
        values.push(a_pow.wedge(&w.power(n - k)).extract()?.re / top);
    }
    Ok(verdict(values, relative_scale(alpha, omega)))
}

/// `m`-positivity through `e_k(λ) > 0`, `k = 1..=m`, for the relative
/// eigenvalues `λ`.
pub fn is_m_positive_spectral(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    m: usize,
) -> Result<PositivityVerdict> {
    let n = omega.n();
    check_m(m, n)?;
    let e = relative_spectrum(alpha, omega)?.elementary_symmetric();
    let values = (1..=m).map(|k| e[k] / binomial(n, k) as f64).collect();
    Ok(verdict(values, relative_scale(alpha, omega)))
}

/// Smallest eigenvalue is at least `-ε ‖A‖`.
pub fn is_semipositive(alpha: &HermitianOneOneForm) -> bool {
    let eig = hermitian_eigen(alpha.matrix());
    eig.min() >= -POSITIVITY_EPS * eig.spectral_radius()
}

/// Number of eigenvalues above `ε ‖A‖`.
pub fn rank(alpha: &HermitianOneOneForm) -> usize {
    let eig = hermitian_eigen(alpha.matrix());
    let cut = POSITIVITY_EPS * eig.spectral_radius();
    eig.values.iter().filter(|&&v| v > cut && v > 0.0).count()
}

/// Semipositive with at least `m` positive eigenvalues relative to `ω`
/// (`m = 0` asks for semipositivity alone).
pub fn satisfies_theorem_hypotheses(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    m: usize,
) -> Result<bool> {
    if !is_semipositive(alpha) {
        return Ok(false);
    }
    Ok(relative_spectrum(alpha, omega)?.positive_count(POSITIVITY_EPS) >= m)
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

/// A random Hermitian matrix with independent Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOneOneForm {
    HermitianOneOneForm {
        matrix: gaussian_matrix(n, n, rng).hermitian_part(),
    }
}

/// A random Kähler form, normalized to trace `n`, with condition number
/// kept below 50.
pub fn random_kahler<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianOneOneForm {
    loop {
        let b = gaussian_matrix(n, n, rng);
        let w = &(&b * &b.adjoint()) + &CMat::identity(n).scale_real(0.25);
        let eig = hermitian_eigen(&w);
        if eig.max() <= 50.0 * eig.min() {
            let tr = w.trace().re;
            return HermitianOneOneForm {
                matrix: w.scale_real(n as f64 / tr).hermitian_part(),
            };
        }
    }
}

const POLARIZATION_ATTEMPTS: usize = 100_000;

/// A random semipositive polarization `B B†` with `B` of shape `n x r`,
/// `m ≤ r ≤ n`, scaled so the largest eigenvalue relative to `ω` is 1 and
/// redrawn until `e_m` of the relative spectrum is at least `margin`.
/// Gives up with a range error after `POLARIZATION_ATTEMPTS` draws.
pub fn random_polarization<R: Rng + ?Sized>(
    omega: &HermitianOneOneForm,
    m: usize,
    margin: f64,
    rng: &mut R,
) -> Result<HermitianOneOneForm> {
    let n = omega.n();
    if m > n {
        return Err(Error::Range(format!("m = {m} exceeds n = {n}")));
    }
    // m = 0 only asks for semipositivity; draw at least rank one
    let m = m.max(1);
    if margin <= 0.0 {
        return Err(Error::Range(format!("margin {margin} must be positive")));
    }
    check_kahler(omega)?;
    for _ in 0..POLARIZATION_ATTEMPTS {
        let r = rng.random_range(m..=n);
        let b = gaussian_matrix(n, r, rng);
        let raw = HermitianOneOneForm {
            matrix: (&b * &b.adjoint()).hermitian_part(),
        };
        let spec = relative_spectrum(&raw, omega)?;
        let top = spec.eigenvalues[0];
        if top <= 0.0 {
            continue;
        }
        let alpha = raw.scale(1.0 / top);
        let e = elementary_symmetric(&spec.eigenvalues.iter().map(|v| v / top).collect::<Vec<_>>());
        if e[m] >= margin {
            return Ok(alpha);
        }
    }
    Err(Error::Range(format!(
        "no polarization with e_{m} >= {margin} in {POLARIZATION_ATTEMPTS} draws"
    )))
}

/// [`random_polarization`] against the standard Kähler form, seeded.
pub fn random_polarization_seeded(
    n: usize,
    m: usize,
    margin: f64,
    seed: u64,
) -> Result<HermitianOneOneForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_polarization(&HermitianOneOneForm::identity(n), m, margin, &mut rng)
}
