//! Hyperplane restriction of forms.
//!
//! `H_v = {z : v·z = 0}` with the bilinear pairing `v·z = Σ v_j z_j`. The
//! restriction to `H_v` is the pullback along `z = M w`, where the columns of
//! `M` are the first `n - 1` columns of a unitary matrix whose last column is
//! parallel to `v̄`; in those coordinates `H_v` is `{u_n = 0}`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{binomial, Form, MultiIndex};
use crate::linalg::{dot_bilinear, dot_c, hermitian_eigen, norm_c, CMat};
use crate::positivity::HermitianOneOneForm;

/// Relative threshold on `v†Φv / tr Φ` for membership in the degeneracy locus.
pub const LOCUS_TOL: f64 = 1e-10;

/// Candidate acceptance margin when searching for hyperplane-avoiding vectors.
pub const AVOIDANCE_MARGIN: f64 = 1e-6;

const AVOIDANCE_TRIES: usize = 4096;
const AVOIDANCE_SEED: u64 = 0x05ee_d0fa_401d;

/// The hyperplane `H_v`, with `v` stored at unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    v: Vec<Complex64>,
}

impl Hyperplane {
    pub fn new(v: Vec<Complex64>) -> Result<Self> {
        let nv = norm_c(&v);
        if v.is_empty() || nv == 0.0 || !nv.is_finite() {
            return Err(Error::Range("hyperplane needs a nonzero covector".into()));
        }
        Ok(Hyperplane {
            v: v.into_iter().map(|z| z / nv).collect(),
        })
    }

    /// `{z_j = 0}`, 1-based.
    pub fn coordinate(n: usize, j: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[j - 1] = Complex64::new(1.0, 0.0);
        Hyperplane { v }
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn covector(&self) -> &[Complex64] {
        &self.v
    }

    /// `i dH ∧ dH̄` for `H(z) = v·z`.
    pub fn defining_form(&self) -> HermitianOneOneForm {
        HermitianOneOneForm::from_covector(&self.v)
    }

    /// `n x (n-1)` isometric embedding of `C^{n-1}` onto `H_v`.
    pub fn embedding(&self) -> CMat {
        let conj: Vec<Complex64> = self.v.iter().map(|z| z.conj()).collect();
        let w = unitary_completion(&conj);
        w.leading_block(self.n(), self.n() - 1)
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        dot_bilinear(&self.v, z).norm() <= 1e-12 * norm_c(z)
    }
}

#[derive(Serialize, Deserialize)]
struct HyperplaneJson {
    v: Vec<[f64; 2]>,
}

impl Serialize for Hyperplane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HyperplaneJson {
            v: self.v.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hyperplane {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let js = HyperplaneJson::deserialize(d)?;
        Hyperplane::new(js.v.iter().map(|p| Complex64::new(p[0], p[1])).collect())
            .map_err(serde::de::Error::custom)
    }
}

/// Unitary matrix whose last column is `x / ‖x‖` up to a unit phase, built
/// from one Householder reflection. Deterministic in `x`.
pub fn unitary_completion(x: &[Complex64]) -> CMat {
    let d = x.len();
    let nx = norm_c(x);
    assert!(nx > 0.0, "completion of the zero vector");
    let last = x[d - 1];
    let phase = if last.norm() > 0.0 {
        last / last.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // y has a real non-negative last entry, so e_n ↦ y is a reflection
    let y: Vec<Complex64> = x.iter().map(|z| z / (phase * nx)).collect();
    let mut u = y.iter().map(|z| -z).collect::<Vec<_>>();
    u[d - 1] += Complex64::new(1.0, 0.0);
    let nu2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if nu2 <= 1e-30 {
        return CMat::identity(d);
    }
    CMat::from_fn(d, d, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        Complex64::new(delta, 0.0) - u[i] * u[j].conj() * (2.0 / nu2)
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let k = a.len();
    let mut d = Complex64::new(1.0, 0.0);
    for c in 0..k {
        let piv = (c..k)
            .max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm()))
            .unwrap();
        if a[piv][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != c {
            a.swap(piv, c);
            d = -d;
        }
        d *= a[c][c];
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            let pivot = a[c].clone();
            for (x, t) in a[r][c..k].iter_mut().zip(&pivot[c..k]) {
                *x -= f * t;
            }
        }
    }
    d
}

/// Pullback of a form along `z = M u`, `M` of shape `n x n'`:
/// `dz_I = Σ_K det M[I, K] du_K` and `dz̄_J = Σ_L conj(det M[J, L]) dū_L`.
pub fn pullback(form: &Form, m: &CMat) -> Form {
    assert_eq!(m.rows(), form.n(), "pullback matrix rows");
    let (n, n2) = (form.n(), m.cols());
    let (p, q) = form.bidegree();
    let mut out = Form::zero(n2, p, q);
    if out.dim() == 0 {
        return out;
    }
    let minors = |deg: usize| -> Vec<Vec<Complex64>> {
        let rows = MultiIndex::all(n, deg);
        let cols = MultiIndex::all(n2, deg);
        rows.iter()
            .map(|ri| {
                let ri = ri.to_vec();
                cols.iter()
                    .map(|ci| {
                        let ci = ci.to_vec();
                        det(ri
                            .iter()
                            .map(|&r| ci.iter().map(|&c| m[(r - 1, c - 1)]).collect())
                            .collect())
                    })
                    .collect()
            })
            .collect()
    };
    let dp = minors(p);
    let dq = minors(q);
    let nq_src = binomial(n, q);
    let nq_dst = binomial(n2, q);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); out.dim()];
    for (s, &z) in form.coeffs().iter().enumerate() {
        if z.re == 0.0 && z.im == 0.0 {
            continue;
        }
        let (ri, rj) = (s / nq_src, s % nq_src);
        for (k, dk) in dp[ri].iter().enumerate() {
            if dk.re == 0.0 && dk.im == 0.0 {
                continue;
            }
            let zk = z * dk;
            for (l, dl) in dq[rj].iter().enumerate() {
                coeffs[k * nq_dst + l] += zk * dl.conj();
            }
        }
    }
    out = Form::from_coeffs(n2, p, q, coeffs).expect("pullback shape");
    out
}

/// Restriction of a form on `C^n` to `H_v ≅ C^{n-1}`. Bidegrees above
/// `n - 1` give the zero space.
pub fn restrict(form: &Form, h: &Hyperplane) -> Result<Form> {
    if form.n() != h.n() {
        return Err(Error::Dimension(format!(
            "form on C^{} restricted to a hyperplane of C^{}",
            form.n(),
            h.n()
        )));
    }
    if form.n() < 2 {
        return Err(Error::Range("restriction needs n ≥ 2".into()));
    }
    Ok(pullback(form, &h.embedding()))
}

/// Restriction of a real `(1,1)`-form, as a Hermitian matrix on `C^{n-1}`.
pub fn restrict_hermitian(
    alpha: &HermitianOneOneForm,
    h: &Hyperplane,
) -> Result<HermitianOneOneForm> {
    if alpha.n() != h.n() || alpha.n() < 2 {
        return Err(Error::Dimension(format!(
            "cannot restrict a form on C^{} to a hyperplane of C^{}",
            alpha.n(),
            h.n()
        )));
    }
    Ok(alpha.pullback(&h.embedding()))
}

/// Both sides of `α^k ∧ ω^{n-k-1} ∧ i dH ∧ dH̄ = α|_H^k ∧ ω|_H^{n-k-1}`,
/// each divided by its own unitary volume form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RestrictionIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub absolute: f64,
    /// `absolute / ((n-1)! ‖α‖^k ‖ω‖^{n-k-1})`.
    pub relative: f64,
}

pub fn restriction_identity(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    k: usize,
    h: &Hyperplane,
) -> Result<RestrictionIdentity> {
    let n = omega.n();
    if alpha.n() != n || h.n() != n {
        return Err(Error::Dimension("α, ω and H must share C^n".into()));
    }
    if k == 0 || k + 1 > n {
        return Err(Error::Range(format!(
            "k = {k} outside 1..={}",
            n.saturating_sub(1)
        )));
    }
    let a = alpha.to_form();
    let w = omega.to_form();
    let lhs = a
        .power(k)
        .wedge(&w.power(n - k - 1))
        .wedge(&h.defining_form().to_form())
        .extract()?;
    let ra = restrict(&a, h)?;
    let rw = restrict(&w, h)?;
    let rhs = ra.power(k).wedge(&rw.power(n - k - 1)).extract()?;
    let absolute = (lhs - rhs).norm();
    let fact: f64 = (1..n).map(|i| i as f64).product();
    let scale = fact
        * alpha.spectral_norm().powi(k as i32)
        * omega.spectral_norm().powi((n - k - 1) as i32);
    let relative = if scale > 0.0 {
        absolute / scale
    } else {
        absolute
    };
    Ok(RestrictionIdentity {
        lhs: lhs.re,
        rhs: rhs.re,
        absolute,
        relative,
    })
}

/// Relative residual of the restriction identity.
pub fn restriction_identity_residual(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    k: usize,
    h: &Hyperplane,
) -> Result<f64> {
    restriction_identity(alpha, omega, k, h).map(|r| r.relative)
}

/// The Hermitian matrix `Φ` with
/// `α^m ∧ ω^{n-m-1} ∧ i dH_v ∧ dH̄_v / Γ = Σ Φ_ij v_i v̄_j`.
pub fn hyperplane_gram(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    m: usize,
) -> Result<CMat> {
    let n = omega.n();
    if alpha.n() != n {
        return Err(Error::Dimension("α and ω live on different spaces".into()));
    }
    if m == 0 || m >= n {
        return Err(Error::Range(format!(
            "m = {m}: the hyperplane gram needs 1 ≤ m ≤ n - 1 = {}",
            n.saturating_sub(1)
        )));
    }
    let f = alpha
        .to_form()
        .power(m)
        .wedge(&omega.to_form().power(n - m - 1));
    let mut g = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let e = Form::monomial(
                n,
                MultiIndex::from_bits(1 << i),
                MultiIndex::from_bits(1 << j),
                Complex64::i(),
            );
            g[(i, j)] = f.wedge(&e).extract()?;
        }
    }
    Ok(g.hermitian_part())
}

/// Value of the quadratic form `Σ Φ_ij v_i v̄_j`.
pub fn gram_value(gram: &CMat, v: &[Complex64]) -> f64 {
    let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    gram.quadratic_form(&conj)
}

/// The degeneracy locus `S(α)` of a semipositive `m`-positive form.
#[derive(Debug, Clone)]
pub struct DegeneracyLocus {
    pub gram: CMat,
    /// Orthonormal basis of `S(α)` as columns.
    pub kernel_basis: CMat,
}

impl DegeneracyLocus {
    pub fn dimension(&self) -> usize {
        self.kernel_basis.cols()
    }

    pub fn value(&self, v: &[Complex64]) -> f64 {
        gram_value(&self.gram, v)
    }

    /// `v ∈ S(α)` iff `Σ Φ_ij v_i v̄_j ≤ 1e-10 tr Φ ‖v‖²`.
    pub fn contains(&self, v: &[Complex64]) -> bool {
        let nv2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        self.value(v) <= LOCUS_TOL * self.gram.trace().re.abs() * nv2
    }
}

pub fn degeneracy_locus(
    alpha: &HermitianOneOneForm,
    omega: &HermitianOneOneForm,
    m: usize,
) -> Result<DegeneracyLocus> {
    let gram = hyperplane_gram(alpha, omega, m)?;
    let eig = hermitian_eigen(&gram);
    let cut = LOCUS_TOL * gram.trace().re.abs();
    let idx: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] <= cut)
        .collect();
    // eigenvectors span {v̄ : v ∈ S(α)}
    let kernel_basis = eig.vectors.select_columns(&idx).conj();
    Ok(DegeneracyLocus { gram, kernel_basis })
}

/// An orthonormal basis with every vector off a list of hyperplanes.
#[derive(Debug, Clone)]
pub struct AvoidingBasis {
    /// Basis vectors as columns.
    pub basis: CMat,
    /// `‖E†E - I‖_F`.
    pub orthonormality_residual: f64,
    /// `min_{i,j} |v_i · e_j|` over unit covectors.
    pub min_margin: f64,
}

/// Inductive construction: pick `e_1` off every `H_{v_i}` and off every line
/// that would make some `H_{v_i}` contain the orthogonal complement of `e_1`,
/// then recurse inside that complement.
pub fn avoid_hyperplanes_basis(n: usize, hyperplanes: &[Hyperplane]) -> Result<AvoidingBasis> {
    if let Some(h) = hyperplanes.iter().find(|h| h.n() != n) {
        return Err(Error::Dimension(format!(
            "hyperplane of C^{} in a basis search on C^{n}",
            h.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(AVOIDANCE_SEED);
    let mut frame = CMat::identity(n);
    let mut chosen: Vec<Vec<Complex64>> = Vec::with_capacity(n);

    for d in (1..=n).rev() {
        // covectors restricted to the current subspace, normalized
        let restricted: Vec<Vec<Complex64>> = hyperplanes
            .iter()
            .filter_map(|h| {
                let r = frame.transpose().mul_vec(h.covector());
                let nr = norm_c(&r);
                (nr > 1e-14).then(|| r.into_iter().map(|z| z / nr).collect())
            })
            .collect();
        let margin = |y: &[Complex64]| -> f64 {
            restricted
                .iter()
                .map(|r| {
                    let off_plane = dot_bilinear(r, y).norm();
                    if d == 1 {
                        return off_plane;
                    }
                    let rc: Vec<Complex64> = r.iter().map(|z| z.conj()).collect();
                    let along = dot_c(&rc, y).norm().min(1.0);
                    off_plane.min((1.0 - along * along).sqrt())
                })
                .fold(f64::INFINITY, f64::min)
        };

        let mut best = vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d];
        let mut best_margin = margin(&best);
        let mut tries = 0;
        while best_margin <= AVOIDANCE_MARGIN && tries < AVOIDANCE_TRIES {
            tries += 1;
            let y = random_unit(d, &mut rng);
            let my = margin(&y);
            if my > best_margin {
                best = y;
                best_margin = my;
            }
        }

        chosen.push(frame.mul_vec(&best));
        if d > 1 {
            let w = unitary_completion(&best);
            frame = &frame * &w.leading_block(d, d - 1);
        }
    }

    let basis = CMat::from_columns(n, &chosen);
    let gram = &basis.adjoint() * &basis;
    let orthonormality_residual = (&gram - &CMat::identity(n)).frobenius_norm();
    let min_margin = hyperplanes
        .iter()
        .flat_map(|h| {
            chosen
                .iter()
                .map(move |e| dot_bilinear(h.covector(), e).norm())
        })
        .fold(f64::INFINITY, f64::min);
    Ok(AvoidingBasis {
        basis,
        orthonormality_residual,
        min_margin,
    })
}

fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    let nv = norm_c(&v);
    v.into_iter().map(|z| z / nv).collect()
}

/// Frobenius residual of `i Σ_j dH_{e_j} ∧ dH̄_{e_j} = ω` for basis columns
/// `e_j` and the standard `ω`, i.e. `‖E E† - I‖_F`.
pub fn frame_identity_check(basis: &CMat) -> f64 {
    let n = basis.rows();
    let mut sum = CMat::zeros(n, n);
    for j in 0..basis.cols() {
        sum = &sum + HermitianOneOneForm::from_covector(&basis.column(j)).matrix();
    }
    (&sum - &CMat::identity(n)).frobenius_norm()
}
