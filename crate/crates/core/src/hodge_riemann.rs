//! The Hermitian form `Q`, Lefschetz maps and primitive subspaces, and the
//! checks built on them.
//!
//! For an [`Instance`] with data `(n, m, p, q, ω, α_1, …, α_{m-p-q+1})`:
//!
//! * `Ω = ω^{n-m} ∧ α_1 ∧ … ∧ α_{m-p-q}`, a `(k, k)`-form with `k = n - p - q`;
//! * `Q(Φ, Ψ) = c · (Ω ∧ Φ ∧ Ψ̄) / Γ` with `c = i^{q-p} (-1)^{(p+q)(p+q+1)/2}`;
//! * `P^{p,q} = ker(Φ ↦ Ω ∧ α_{m-p-q+1} ∧ Φ)`.
//!
//! Matrices act on coefficient vectors in the canonical slot order of
//! [`basis_of`]. The Gram matrix `H` of `Q` is arranged so that
//! `Q(Φ, Ψ) = y† H x` for coefficient vectors `x` of `Φ` and `y` of `Ψ`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{basis_of, binomial, i_pow, wedge_all, Form, MultiIndex};
use crate::linalg::{
    cholesky, dot_c, hermitian_eigen, hermitian_eigenvalues, inertia, lower_triangular_inverse,
    norm_c, orthonormalize, svd, CMat, Svd,
};
use crate::positivity::{
    check_kahler, random_kahler, random_polarization, satisfies_theorem_hypotheses,
    HermitianOneOneForm,
};
use crate::tolerance::Tolerance;

/// `e_m` margin enforced on generated polarizations.
pub const GENERATION_MARGIN: f64 = 1e-6;

/// The data of a mixed Hodge-Riemann problem on `C^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub omega: HermitianOneOneForm,
    pub alphas: Vec<HermitianOneOneForm>,
}

impl Instance {
    /// Builds and fully validates an instance, including the positivity
    /// hypotheses on every polarization.
    pub fn new(
        n: usize,
        m: usize,
        p: usize,
        q: usize,
        omega: HermitianOneOneForm,
        alphas: Vec<HermitianOneOneForm>,
    ) -> Result<Self> {
        let inst = Self::new_unvalidated(n, m, p, q, omega, alphas)?;
        inst.validate_hypotheses()?;
        Ok(inst)
    }

    /// Checks shapes and that `ω` is Kähler, but not the hypotheses on the
    /// polarizations. Used for counterexample search and replay.
    pub fn new_unvalidated(
        n: usize,
        m: usize,
        p: usize,
        q: usize,
        omega: HermitianOneOneForm,
        alphas: Vec<HermitianOneOneForm>,
    ) -> Result<Self> {
        let inst = Instance {
            n,
            m,
            p,
            q,
            omega,
            alphas,
        };
        inst.validate_shape()?;
        Ok(inst)
    }

    pub fn validate_shape(&self) -> Result<()> {
        let (n, m, p, q) = (self.n, self.m, self.p, self.q);
        if n == 0 || n > 8 {
            return Err(Error::InvalidInstance(format!("n = {n} outside 1..=8")));
        }
        if p + q > m || m > n {
            return Err(Error::InvalidInstance(format!(
                "need 0 ≤ p, q and p + q ≤ m ≤ n, got (n, m, p, q) = ({n}, {m}, {p}, {q})"
            )));
        }
        if self.alphas.len() != m - p - q + 1 {
            return Err(Error::InvalidInstance(format!(
                "expected m - p - q + 1 = {} polarizations, got {}",
                m - p - q + 1,
                self.alphas.len()
            )));
        }
        if self.omega.n() != n || self.alphas.iter().any(|a| a.n() != n) {
            return Err(Error::InvalidInstance(format!(
                "all forms must be {n}x{n} matrices"
            )));
        }
        check_kahler(&self.omega).map_err(|e| Error::InvalidInstance(format!("omega: {e}")))
    }

    /// Every `α_j` semipositive with at least `m` positive eigenvalues.
    pub fn validate_hypotheses(&self) -> Result<()> {
        for (j, a) in self.alphas.iter().enumerate() {
            if !satisfies_theorem_hypotheses(a, &self.omega, self.m)? {
                return Err(Error::InvalidInstance(format!(
                    "alpha_{} is not semipositive with at least {} positive eigenvalues",
                    j + 1,
                    self.m
                )));
            }
        }
        Ok(())
    }

    /// All forms standard: `ω = α_j = i Σ dz_j ∧ dz̄_j`.
    pub fn classical(n: usize, m: usize, p: usize, q: usize) -> Result<Self> {
        let w = HermitianOneOneForm::identity(n);
        let count = (m + 1)
            .checked_sub(p + q)
            .ok_or_else(|| Error::InvalidInstance(format!("p + q = {} exceeds m = {m}", p + q)))?;
        Self::new(n, m, p, q, w.clone(), vec![w; count])
    }

    /// Random Kähler `ω` and random semipositive polarizations of rank at
    /// least `m` (rank exactly `m` occurs with positive probability).
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        m: usize,
        p: usize,
        q: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if p + q > m || m > n {
            return Err(Error::InvalidInstance(format!(
                "need p + q ≤ m ≤ n, got ({n}, {m}, {p}, {q})"
            )));
        }
        let omega = random_kahler(n, rng);
        let alphas = (0..m - p - q + 1)
            .map(|_| random_polarization(&omega, m, GENERATION_MARGIN, rng))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, m, p, q, omega, alphas)
    }

    pub fn random_seeded(n: usize, m: usize, p: usize, q: usize, seed: u64) -> Result<Self> {
        Self::random(n, m, p, q, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// `α_1, …, α_{m-p-q}`, the factors of `Ω`.
    pub fn omega_factors(&self) -> &[HermitianOneOneForm] {
        &self.alphas[..self.alphas.len() - 1]
    }

    /// `α_{m-p-q+1}`, which cuts out the primitive subspace.
    pub fn primitive_alpha(&self) -> &HermitianOneOneForm {
        self.alphas
            .last()
            .expect("instances carry at least one polarization")
    }

    /// Same data with every polarization replaced by `(1 - t) α_j + t ω`.
    pub fn deformed(&self, t: f64) -> Instance {
        Instance {
            alphas: self.alphas.iter().map(|a| a.lerp(&self.omega, t)).collect(),
            ..self.clone()
        }
    }

    /// Same data with `ω` and every polarization scaled by `s`.
    pub fn scaled(&self, s: f64) -> Instance {
        Instance {
            omega: self.omega.scale(s),
            alphas: self.alphas.iter().map(|a| a.scale(s)).collect(),
            ..self.clone()
        }
    }
}

/// `c = i^{q-p} (-1)^{(p+q)(p+q+1)/2}`.
pub fn hr_constant(p: usize, q: usize) -> Complex64 {
    let s = p + q;
    let sign = if (s * (s + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    i_pow(q as i64 - p as i64) * sign
}

/// `Ω = ω^{n-m} ∧ α_1 ∧ … ∧ α_{m-p-q}`.
pub fn build_omega(inst: &Instance) -> Form {
    let w = inst.omega.to_form();
    let factors: Vec<Form> = inst.omega_factors().iter().map(|a| a.to_form()).collect();
    w.power(inst.n - inst.m).wedge(&wedge_all(inst.n, &factors))
}

fn check_bidegree(f: &Form, p: usize, q: usize, n: usize) -> Result<()> {
    if f.n() != n || f.bidegree() != (p, q) {
        return Err(Error::Degree(format!(
            "expected a ({p},{q})-form on C^{n}, got a {:?}-form on C^{}",
            f.bidegree(),
            f.n()
        )));
    }
    Ok(())
}

/// `Q(Φ, Ψ) = c · extract(Ω ∧ Φ ∧ Ψ̄)`.
pub fn q_form(inst: &Instance, phi: &Form, psi: &Form) -> Result<Complex64> {
    check_bidegree(phi, inst.p, inst.q, inst.n)?;
    check_bidegree(psi, inst.p, inst.q, inst.n)?;
    let omega = build_omega(inst);
    Ok(hr_constant(inst.p, inst.q) * omega.wedge(phi).wedge(&psi.conjugate()).extract()?)
}

/// Gram matrix `H` of `Q_Ω` on `Λ^{p,q}`, with `H[a][b] = Q(e_b, e_a)`.
pub fn q_gram(omega: &Form, p: usize, q: usize) -> CMat {
    let n = omega.n();
    assert_eq!(
        omega.bidegree(),
        (n - p - q, n - p - q),
        "Ω has the wrong bidegree"
    );
    gram_from_lefschetz(&omega.wedge_operator(p, q), n, p, q)
}

/// `Ω ∧ e_b` lands in `Λ^{n-q,n-p}`, where `conj(e_a)` pairs with exactly
/// one slot, so each row of `H` is a signed row of the Lefschetz matrix.
fn gram_from_lefschetz(lef: &CMat, n: usize, p: usize, q: usize) -> CMat {
    let c = hr_constant(p, q);
    let full = MultiIndex::from_bits(((1u64 << n) - 1) as u32);
    let dual_q = binomial(n, n - p);
    let basis = basis_of(n, p, q);
    let mut h = CMat::zeros(basis.len(), basis.len());
    for (a, e) in basis.iter().enumerate() {
        let conj = e.conjugate();
        let (ja, ia, _) = conj.terms()[0];
        let (di, dj) = (
            MultiIndex::from_bits(full.bits() ^ ja.bits()),
            MultiIndex::from_bits(full.bits() ^ ia.bits()),
        );
        let pairing = Form::monomial(n, di, dj, Complex64::new(1.0, 0.0))
            .wedge(&conj)
            .extract()
            .expect("top degree");
        let row = di.rank(n) * dual_q + dj.rank(n);
        for b in 0..basis.len() {
            h[(a, b)] = c * pairing * lef[(row, b)];
        }
    }
    h
}

/// Smallest over largest singular value of an operator, with the verdict
/// `ratio > tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankCheck {
    pub holds: bool,
    pub rank: usize,
    pub dim: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub ratio: f64,
}

/// Below this `λ_min/λ_max` of `A†A` the Gram route is not trusted and the
/// Jacobi SVD decides.
const GRAM_ROUTE_FLOOR: f64 = 1e-8;

fn full_rank_check(op: &CMat, rel_tol: f64) -> RankCheck {
    let dim = op.cols();
    if op.rows() == dim && dim > 0 {
        // a well-conditioned square operator is settled by the spectrum of A†A
        let ev = hermitian_eigenvalues(&(&op.adjoint() * op));
        let (lo, hi) = (ev[0], ev[dim - 1]);
        if hi > 0.0 && lo > GRAM_ROUTE_FLOOR * hi {
            let (sigma_min, sigma_max) = (lo.sqrt(), hi.sqrt());
            let ratio = sigma_min / sigma_max;
            return RankCheck {
                holds: ratio > rel_tol,
                rank: dim,
                dim,
                sigma_min,
                sigma_max,
                ratio,
            };
        }
    }
    let s = svd(op);
    let (sigma_min, sigma_max) = (s.min(), s.max());
    let ratio = if sigma_max > 0.0 {
        sigma_min / sigma_max
    } else {
        0.0
    };
    let rank = s.rank(rel_tol);
    RankCheck {
        holds: op.rows() == op.cols() && rank == dim && ratio > rel_tol,
        rank,
        dim,
        sigma_min,
        sigma_max,
        ratio,
    }
}

/// Matrix of `Φ ↦ Ω ∧ Φ`, `Λ^{p,q} → Λ^{n-q,n-p}`.
pub fn lefschetz_matrix(inst: &Instance) -> CMat {
    build_omega(inst).wedge_operator(inst.p, inst.q)
}

/// Hard Lefschetz: the Lefschetz matrix is invertible.
pub fn hl_holds(inst: &Instance, tol: &Tolerance) -> RankCheck {
    Analysis::new(inst, tol).hl()
}

/// Matrix of `Φ ↦ Ω ∧ α_{m-p-q+1} ∧ Φ`, `Λ^{p,q} → Λ^{n-q+1,n-p+1}`; it has
/// no rows when `p = 0` or `q = 0`.
pub fn primitivity_matrix(inst: &Instance) -> CMat {
    build_omega(inst)
        .wedge(&inst.primitive_alpha().to_form())
        .wedge_operator(inst.p, inst.q)
}

/// `P^{p,q}` with an orthonormal basis of coefficient vectors.
#[derive(Debug, Clone)]
pub struct PrimitiveSubspace {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// Basis vectors as columns, orthonormal for the coefficient inner product.
    pub basis: CMat,
    pub dimension: usize,
}

impl PrimitiveSubspace {
    /// `C(n,p)C(n,q) - C(n,p-1)C(n,q-1)`.
    pub fn expected_dimension(&self) -> usize {
        primitive_dimension_formula(self.n, self.p, self.q)
    }

    pub fn forms(&self) -> Vec<Form> {
        (0..self.dimension)
            .map(|j| {
                Form::from_coeffs(self.n, self.p, self.q, self.basis.column(j))
                    .expect("basis vector shape")
            })
            .collect()
    }
}

pub fn primitive_dimension_formula(n: usize, p: usize, q: usize) -> usize {
    let lower = if p == 0 || q == 0 {
        0
    } else {
        binomial(n, p - 1) * binomial(n, q - 1)
    };
    binomial(n, p) * binomial(n, q) - lower
}

fn primitive_from(
    inst: &Instance,
    a: &CMat,
    a_svd: Option<&Svd>,
    rel_tol: f64,
) -> PrimitiveSubspace {
    let dim = a.cols();
    let raw = match a_svd {
        Some(sv) => sv.kernel(rel_tol),
        None => CMat::identity(dim),
    };
    let basis = CMat::from_columns(dim, &orthonormalize(&raw.columns(), 1e-8));
    PrimitiveSubspace {
        n: inst.n,
        p: inst.p,
        q: inst.q,
        dimension: basis.cols(),
        basis,
    }
}

pub fn primitive_subspace(inst: &Instance, tol: &Tolerance) -> PrimitiveSubspace {
    Analysis::new(inst, tol).primitive
}

/// Gram matrix of `Q` on `Λ^{p,q}` with its spectrum and signature.
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    #[serde(skip)]
    pub gram: CMat,
    pub eigenvalues: Vec<f64>,
    /// `(positive, negative, zero)` at the rank threshold.
    pub signature: (usize, usize, usize),
    #[serde(serialize_with = "ser_complex")]
    pub hr_constant: Complex64,
    /// Largest entry of `|H - H†|`.
    pub hermitian_defect: f64,
}

fn spectral_radius(h: &CMat) -> f64 {
    hermitian_eigenvalues(h)
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn gram_report_of(gram: CMat, c: Complex64, tol: &Tolerance) -> GramReport {
    let hermitian_defect = gram.hermitian_defect();
    let eigenvalues = hermitian_eigenvalues(&gram);
    let signature = inertia(&eigenvalues, tol.rank);
    GramReport {
        gram,
        eigenvalues,
        signature,
        hr_constant: c,
        hermitian_defect,
    }
}

/// `Q` on all of `Λ^{p,q}`; non-degeneracy means a zero null count.
pub fn gram_report(inst: &Instance, tol: &Tolerance) -> GramReport {
    Analysis::new(inst, tol).gram_report()
}

/// Positivity of `Q` on the primitive subspace.
#[derive(Debug, Clone, Serialize)]
pub struct HrrReport {
    pub verdict: bool,
    pub primitive_dimension: usize,
    pub expected_dimension: usize,
    pub lambda_min: f64,
    pub gram_norm: f64,
    /// `λ_min / ‖gram‖`.
    pub margin: f64,
    pub report: GramReport,
}

fn restricted_gram(h: &CMat, basis: &CMat) -> CMat {
    (&(&basis.adjoint() * h) * basis).hermitian_part()
}

fn hrr_on(h: &CMat, prim: &PrimitiveSubspace, c: Complex64, tol: &Tolerance) -> HrrReport {
    let g = restricted_gram(h, &prim.basis);
    let report = gram_report_of(g, c, tol);
    let lambda_min = report.eigenvalues.first().copied().unwrap_or(f64::NAN);
    let gram_norm = report
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let margin = if gram_norm > 0.0 {
        lambda_min / gram_norm
    } else {
        0.0
    };
    HrrReport {
        verdict: prim.dimension > 0 && margin > tol.rank,
        primitive_dimension: prim.dimension,
        expected_dimension: prim.expected_dimension(),
        lambda_min,
        gram_norm,
        margin,
        report,
    }
}

pub fn verify_hrr(inst: &Instance, tol: &Tolerance) -> HrrReport {
    Analysis::new(inst, tol).hrr()
}

/// Lefschetz decomposition `Λ^{p,q} = P^{p,q} ⊕ α ∧ Λ^{p-1,q-1}`.
#[derive(Debug, Clone, Serialize)]
pub struct LdReport {
    pub verdict: bool,
    /// Hard Lefschetz for `Ω` on `(p, q)` and for `Ω ∧ α²` on `(p-1, q-1)`.
    pub precondition: bool,
    pub dim_total: usize,
    pub dim_primitive: usize,
    pub dim_image: usize,
    pub dim_lower: usize,
    /// Rank of the stacked bases of `P` and `α ∧ Λ^{p-1,q-1}`.
    pub stacked_rank: usize,
    pub dims_add: bool,
    pub trivial_intersection: bool,
    /// `max |Q(φ, α∧ψ)| / (‖H‖ ‖φ‖ ‖α∧ψ‖)`.
    pub orthogonality_residual: f64,
}

pub fn verify_ld(inst: &Instance, tol: &Tolerance) -> LdReport {
    let a = Analysis::new(inst, tol);
    let hl = a.hl();
    a.ld(&hl)
}

/// Everything derived from one instance that the checks share: `Ω`, the
/// Lefschetz and primitivity matrices, the Gram matrix of `Q` and `P^{p,q}`.
#[derive(Debug, Clone)]
pub struct Analysis<'a> {
    pub inst: &'a Instance,
    pub tol: Tolerance,
    pub omega: Form,
    pub lefschetz: CMat,
    pub gram: CMat,
    /// Matrix of `Φ ↦ Ω ∧ α_{m-p-q+1} ∧ Φ`.
    pub primitivity: CMat,
    pub primitive: PrimitiveSubspace,
    primitivity_svd: Option<Svd>,
}

impl<'a> Analysis<'a> {
    pub fn new(inst: &'a Instance, tol: &Tolerance) -> Self {
        let (n, p, q) = (inst.n, inst.p, inst.q);
        let omega = build_omega(inst);
        let lefschetz = omega.wedge_operator(p, q);
        let gram = gram_from_lefschetz(&lefschetz, n, p, q);
        let primitivity = omega
            .wedge(&inst.primitive_alpha().to_form())
            .wedge_operator(p, q);
        let primitivity_svd = (primitivity.rows() > 0).then(|| svd(&primitivity));
        let primitive = primitive_from(inst, &primitivity, primitivity_svd.as_ref(), tol.rank);
        Analysis {
            inst,
            tol: *tol,
            omega,
            lefschetz,
            gram,
            primitivity,
            primitive,
            primitivity_svd,
        }
    }

    pub fn hl(&self) -> RankCheck {
        full_rank_check(&self.lefschetz, self.tol.rank)
    }

    pub fn gram_report(&self) -> GramReport {
        gram_report_of(
            self.gram.clone(),
            hr_constant(self.inst.p, self.inst.q),
            &self.tol,
        )
    }

    pub fn hrr(&self) -> HrrReport {
        hrr_on(
            &self.gram,
            &self.primitive,
            hr_constant(self.inst.p, self.inst.q),
            &self.tol,
        )
    }

    /// Lefschetz decomposition, given the hard Lefschetz check for `Ω`.
    pub fn ld(&self, hl: &RankCheck) -> LdReport {
        let (inst, tol) = (self.inst, &self.tol);
        let (n, p, q) = (inst.n, inst.p, inst.q);
        let prim = &self.primitive;
        let dim_total = binomial(n, p) * binomial(n, q);
        let hl = hl.holds;

        if p == 0 || q == 0 {
            let dims_add = prim.dimension == dim_total;
            return LdReport {
                verdict: hl && dims_add,
                precondition: hl,
                dim_total,
                dim_primitive: prim.dimension,
                dim_image: 0,
                dim_lower: 0,
                stacked_rank: prim.dimension,
                dims_add,
                trivial_intersection: true,
                orthogonality_residual: 0.0,
            };
        }

        let alpha = inst.primitive_alpha().to_form();
        let shifted = self
            .omega
            .wedge(&alpha)
            .wedge(&alpha)
            .wedge_operator(p - 1, q - 1);
        let precondition = hl && full_rank_check(&shifted, tol.rank).holds;

        let image = alpha.wedge_operator(p - 1, q - 1);
        let dim_lower = image.cols();
        let dim_image = svd(&image).rank(tol.rank);

        // rank of [P | α∧Λ^{p-1,q-1}] = dim P + rank of the image projected off P
        let normalized: Vec<Vec<Complex64>> = image
            .columns()
            .into_iter()
            .map(|c| {
                let nc = norm_c(&c);
                c.into_iter().map(|z| z / nc).collect()
            })
            .collect();
        let normalized = CMat::from_columns(dim_total, &normalized);
        let projected = &normalized - &(&prim.basis * &(&prim.basis.adjoint() * &normalized));
        let stacked_rank = prim.dimension + svd(&projected).rank(tol.rank);
        let trivial_intersection = stacked_rank == prim.dimension + dim_lower;
        let dims_add = prim.dimension + dim_image == dim_total && dim_image == dim_lower;

        let h = &self.gram;
        let h_norm = spectral_radius(h);
        let hb = h * &prim.basis;
        let mut residual: f64 = 0.0;
        for c in 0..dim_lower {
            let psi = image.column(c);
            let npsi = norm_c(&psi);
            for i in 0..prim.dimension {
                let v = dot_c(&psi, &hb.column(i)).norm();
                residual = residual.max(v / (h_norm * npsi));
            }
        }

        LdReport {
            verdict: precondition
                && dims_add
                && trivial_intersection
                && residual < tol.orthogonality,
            precondition,
            dim_total,
            dim_primitive: prim.dimension,
            dim_image,
            dim_lower,
            stacked_rank,
            dims_add,
            trivial_intersection,
            orthogonality_residual: residual,
        }
    }

    /// Local-estimate constants, given the HRR report for this instance.
    ///
    /// Works along the splitting `Λ^{p,q} = P ⊕ R`, with `R` the row space
    /// of `A`. `c₁ = f / λ_min(Q|_P)` for a few factors `f > 1`; for each,
    /// the least admissible `c₂` comes from the Schur complement of the `P`
    /// block,
    ///
    /// `c₂ A_R†A_R ⪰ I - c₁ H_RR + c₁² H_RP (c₁ H_PP - I)⁻¹ H_PR`,
    ///
    /// and the pair with the smallest `c₁/c₁⁰ + c₂/c₂⁰` is kept, where
    /// `c₂⁰ = 1/σ_+(A)²`. `c₂` carries 1% slack over the Schur bound; the pair
    /// is then checked on the full operator.
    pub fn local_estimate(&self, hrr: &HrrReport) -> Result<LocalEstimate> {
        if !hrr.verdict {
            return Err(Error::Precondition(format!(
                "Q is not positive definite on the primitive subspace (margin {:.3e})",
                hrr.margin
            )));
        }
        let tol = &self.tol;
        let h = self.gram.hermitian_part();
        let a = &self.primitivity;
        let dim = h.rows();
        let ata = if a.rows() == 0 {
            CMat::zeros(dim, dim)
        } else {
            (&a.adjoint() * a).hermitian_part()
        };
        let (row_space, sigma_plus) = match &self.primitivity_svd {
            None => (CMat::zeros(dim, 0), 1.0),
            Some(s) => {
                let r = s.rank(tol.rank);
                let sp = if r == 0 { 1.0 } else { s.values[r - 1] };
                (s.row_space(tol.rank), sp)
            }
        };
        let c1_base = 1.0 / hrr.lambda_min;
        let c2_base = 1.0 / (sigma_plus * sigma_plus);

        let pb = &self.primitive.basis;
        let rb = &row_space;
        let h_pp = restricted_gram(&h, pb);
        let h_pr = &(&pb.adjoint() * &h) * rb;
        let h_rr = restricted_gram(&h, rb);
        let g_r = restricted_gram(&ata, rb);
        let g_inv_sqrt = spectral_apply(&g_r, |g| if g > 0.0 { 1.0 / g.sqrt() } else { 0.0 });

        let mut best: Option<(f64, f64, f64)> = None;
        for factor in [1.25, 1.5, 2.0, 4.0, 8.0, 16.0] {
            let c1 = factor * c1_base;
            let c2 = if rb.cols() == 0 {
                c2_base
            } else {
                let x = &h_pp.scale_real(c1) - &CMat::identity(h_pp.rows());
                let b = h_pr.scale_real(c1);
                // B† X⁻¹ B = (L⁻¹B)†(L⁻¹B) for X = L L†
                let schur = match cholesky(&x) {
                    Some(l) => {
                        let y = &lower_triangular_inverse(&l) * &b;
                        &y.adjoint() * &y
                    }
                    None => &(&b.adjoint() * &spectral_apply(&x, |v| 1.0 / v)) * &b,
                };
                let k = &(&CMat::identity(rb.cols()) - &h_rr.scale_real(c1)) + &schur;
                let kk = (&(&g_inv_sqrt * &k) * &g_inv_sqrt).hermitian_part();
                let top = hermitian_eigenvalues(&kk).last().copied().unwrap_or(0.0);
                // 1% slack keeps the certificate clear of rounding at large c₂
                top.max(0.0) * 1.01 + 1e-12 * c2_base
            };
            let cost = factor + c2 / c2_base;
            if best.is_none_or(|(_, _, bc)| cost < bc) {
                best = Some((c1, c2, cost));
            }
        }
        let (c1, c2, _) = best.expect("factor list is non-empty");
        let min_eig = certificate_min_eigenvalue(&h, &ata, c1, c2);
        Ok(LocalEstimate {
            c1,
            c2,
            certificate_min_eigenvalue: min_eig,
            certified: min_eig >= -tol.certificate,
        })
    }
}

/// One grid point of the deformation `Ω_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomotopyPoint {
    pub t: f64,
    pub signature: (usize, usize, usize),
    pub min_abs_eigenvalue: f64,
    pub scale: f64,
    pub primitive_dimension: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyReport {
    pub verdict: bool,
    pub constant_signature: bool,
    /// `min_t min|λ| / scale`.
    pub margin: f64,
    pub points: Vec<HomotopyPoint>,
}

/// Signature of `Q_t` on `P_t` along `α_j ↦ (1 - t) α_j + t ω`.
pub fn homotopy_sweep(inst: &Instance, steps: usize, tol: &Tolerance) -> Result<HomotopyReport> {
    if steps < 2 {
        return Err(Error::Range(format!("steps = {steps}, need at least 2")));
    }
    let points: Vec<HomotopyPoint> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            let it = inst.deformed(t);
            let an = Analysis::new(&it, tol);
            let r = an.hrr();
            let prim = &an.primitive;
            let min_abs = r
                .report
                .eigenvalues
                .iter()
                .map(|v| v.abs())
                .fold(f64::INFINITY, f64::min);
            HomotopyPoint {
                t,
                signature: r.report.signature,
                min_abs_eigenvalue: min_abs,
                scale: r.gram_norm,
                primitive_dimension: prim.dimension,
            }
        })
        .collect();
    let constant_signature = points.windows(2).all(|w| w[0].signature == w[1].signature);
    let margin = points
        .iter()
        .map(|pt| {
            if pt.scale > 0.0 {
                pt.min_abs_eigenvalue / pt.scale
            } else {
                0.0
            }
        })
        .fold(f64::INFINITY, f64::min);
    Ok(HomotopyReport {
        verdict: constant_signature && margin > tol.rank,
        constant_signature,
        margin,
        points,
    })
}

/// Constants with `‖Φ‖² ≤ c₁ Q(Φ,Φ) + c₂ ‖Ω∧α∧Φ‖²` on `Λ^{p,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalEstimate {
    pub c1: f64,
    pub c2: f64,
    /// `λ_min(c₁ H + c₂ A†A - I)`.
    pub certificate_min_eigenvalue: f64,
    pub certified: bool,
}

/// Smallest eigenvalue of `c₁ H + c₂ A†A - I`.
pub fn certificate_min_eigenvalue(h: &CMat, ata: &CMat, c1: f64, c2: f64) -> f64 {
    let op = &(&h.scale_real(c1) + &ata.scale_real(c2)) - &CMat::identity(h.rows());
    hermitian_eigenvalues(&op).first().copied().unwrap_or(0.0)
}

/// `W f(D) W†` for a Hermitian matrix with eigenpairs `(D, W)`.
fn spectral_apply(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let eig = hermitian_eigen(m);
    let fw = CMat::from_fn(m.rows(), m.cols(), |i, j| {
        eig.vectors[(i, j)] * f(eig.values[j])
    });
    &fw * &eig.vectors.adjoint()
}

/// See [`Analysis::local_estimate`].
pub fn local_estimate_constants(inst: &Instance, tol: &Tolerance) -> Result<LocalEstimate> {
    let a = Analysis::new(inst, tol);
    let hrr = a.hrr();
    a.local_estimate(&hrr)
}

/// Worst pointwise violation of the local estimate over random unit `Φ`:
/// `max (‖Φ‖² - c₁ Q(Φ,Φ) - c₂ ‖Ω∧α∧Φ‖²)`.
pub fn local_estimate_sampling(
    inst: &Instance,
    est: &LocalEstimate,
    samples: usize,
    seed: u64,
) -> f64 {
    let h = q_gram(&build_omega(inst), inst.p, inst.q);
    let a = primitivity_matrix(inst);
    let dim = h.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex64::new(re, im)
            })
            .collect();
        let nx = norm_c(&x);
        let x: Vec<Complex64> = x.into_iter().map(|z| z / nx).collect();
        let qv = h.quadratic_form(&x);
        let ax = if a.rows() == 0 {
            0.0
        } else {
            a.mul_vec(&x).iter().map(|z| z.norm_sqr()).sum()
        };
        worst = worst.max(1.0 - est.c1 * qv - est.c2 * ax);
    }
    worst
}

/// Whether `Φ ↦ Ω ∧ Φ` is an isomorphism `Λ^{p,q} → Λ^{n-q,n-p}`.
pub fn is_lefschetz_form(omega_form: &Form, p: usize, q: usize, tol: &Tolerance) -> Result<bool> {
    let n = omega_form.n();
    if p + q > n {
        return Err(Error::Degree(format!("p + q = {} exceeds n = {n}", p + q)));
    }
    let k = n - p - q;
    check_bidegree(omega_form, k, k, n)?;
    Ok(full_rank_check(&omega_form.wedge_operator(p, q), tol.rank).holds)
}

/// Per-sample result of the Hodge-Riemann-form test.
#[derive(Debug, Clone, Serialize)]
pub struct HodgeRiemannFormCheck {
    /// `Ω` itself is a Lefschetz form for `(p, q)`.
    pub lefschetz: bool,
    /// Along the whole path, `Ω_t ∧ α^{2r}` is Lefschetz for `(p-r, q-r)`, `r = 0, 1`.
    pub hodge_riemann: bool,
    /// `(r = 0, r = 1)` verdicts per path sample.
    pub samples: Vec<(bool, bool)>,
}

/// Tests `Ω` and each sample `Ω_t` of a deformation path (which should end
/// at a product `ω^{n-m} ∧ α_1 ∧ … ∧ α_{m-p-q}`). The `r = 1` condition is
/// vacuous when `p = 0` or `q = 0`.
pub fn is_hodge_riemann_form(
    omega_form: &Form,
    path: &[Form],
    alpha: &HermitianOneOneForm,
    p: usize,
    q: usize,
    tol: &Tolerance,
) -> Result<HodgeRiemannFormCheck> {
    let lefschetz = is_lefschetz_form(omega_form, p, q, tol)?;
    let a = alpha.to_form();
    let a2 = a.wedge(&a);
    let mut samples = Vec::with_capacity(path.len() + 1);
    for om in std::iter::once(omega_form).chain(path) {
        let r0 = is_lefschetz_form(om, p, q, tol)?;
        let r1 = if p == 0 || q == 0 {
            true
        } else {
            let shifted = om.wedge(&a2);
            full_rank_check(&shifted.wedge_operator(p - 1, q - 1), tol.rank).holds
        };
        samples.push((r0, r1));
    }
    Ok(HodgeRiemannFormCheck {
        lefschetz,
        hodge_riemann: samples.iter().all(|&(a, b)| a && b),
        samples,
    })
}

/// `Ω_t` on a uniform grid of `steps` points from `t = 0` to `t = 1`.
pub fn deformation_path(inst: &Instance, steps: usize) -> Vec<Form> {
    (0..steps)
        .map(|i| {
            let t = if steps > 1 {
                i as f64 / (steps - 1) as f64
            } else {
                1.0
            };
            build_omega(&inst.deformed(t))
        })
        .collect()
}
