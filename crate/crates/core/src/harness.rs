//! Batch verification: per-instance reports, seeded sweeps, fibration
//! models, counterexample search and the restriction/deformation drivers
//! behind the `hrlab` binary.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hodge_riemann::{
    homotopy_sweep, local_estimate_sampling, Analysis, HomotopyReport, Instance,
};
use crate::linalg::CMat;
use crate::positivity::{
    check_kahler, elementary_symmetric, is_m_positive, is_semipositive, random_hermitian,
    random_kahler, rank, relative_spectrum, HermitianOneOneForm,
};
use crate::restriction::{
    degeneracy_locus, gram_value, hyperplane_gram, restrict_hermitian, restriction_identity,
    Hyperplane,
};
use crate::tolerance::Tolerance;

/// Bound on the relative restriction-identity residual.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Allowed pointwise slack in the sampled local estimate.
pub const SAMPLING_SLACK: f64 = 1e-8;

/// One named check of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub verdict: bool,
    pub margin: f64,
    pub detail: Value,
}

impl CheckResult {
    fn new(verdict: bool, margin: f64, detail: Value) -> Self {
        CheckResult {
            verdict,
            // JSON has no infinities
            margin: if margin.is_nan() {
                0.0
            } else {
                margin.clamp(-f64::MAX, f64::MAX)
            },
            detail,
        }
    }
}

/// Which checks to run and how hard.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Grid points of the deformation; 0 skips the homotopy check.
    pub steps: usize,
    /// Random unit vectors for the pointwise local-estimate check; 0 skips it.
    pub samples: usize,
    /// Seed of the local-estimate samples.
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            steps: 32,
            samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub checks: BTreeMap<String, CheckResult>,
    pub warnings: Vec<String>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, c)| !c.verdict)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

fn hypothesis_warnings(inst: &Instance) -> Vec<String> {
    let mut out = Vec::new();
    for (j, a) in inst.alphas.iter().enumerate() {
        if !is_semipositive(a) {
            out.push(format!("alpha_{} is not semipositive", j + 1));
        }
        match relative_spectrum(a, &inst.omega) {
            Ok(spec) => {
                let count = spec.positive_count(crate::positivity::POSITIVITY_EPS);
                if count < inst.m {
                    out.push(format!(
                        "alpha_{} has {count} positive eigenvalues, fewer than m = {}",
                        j + 1,
                        inst.m
                    ));
                }
                if inst.m > 0 {
                    let top = spec
                        .eigenvalues
                        .first()
                        .copied()
                        .unwrap_or(0.0)
                        .abs()
                        .max(1e-300);
                    let scaled: Vec<f64> = spec.eigenvalues.iter().map(|v| v / top).collect();
                    let e = elementary_symmetric(&scaled);
                    if e[inst.m] < crate::hodge_riemann::GENERATION_MARGIN {
                        out.push(format!(
                            "alpha_{}: e_{} of the normalized relative spectrum is {:.3e}, below the generation margin",
                            j + 1,
                            inst.m,
                            e[inst.m]
                        ));
                    }
                }
            }
            Err(e) => out.push(e.to_string()),
        }
    }
    out
}

/// Runs hard Lefschetz, non-degeneracy, HRR, the Lefschetz decomposition,
/// the local estimate and (optionally) the homotopy on one instance.
pub fn run_checks(inst: &Instance, opts: &CheckOptions, tol: &Tolerance) -> VerificationReport {
    let an = Analysis::new(inst, tol);
    let mut checks = BTreeMap::new();

    let hl = an.hl();
    checks.insert(
        "hl".to_string(),
        CheckResult::new(
            hl.holds,
            hl.ratio,
            serde_json::to_value(hl).expect("plain data"),
        ),
    );

    let gram = an.gram_report();
    let (_, _, zeros) = gram.signature;
    let min_abs = gram
        .eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    let max_abs = gram.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    checks.insert(
        "nondegeneracy".to_string(),
        CheckResult::new(
            zeros == 0,
            if max_abs > 0.0 {
                min_abs / max_abs
            } else {
                0.0
            },
            json!({
                "signature": gram.signature,
                "hr_constant": [gram.hr_constant.re, gram.hr_constant.im],
                "hermitian_defect": gram.hermitian_defect,
            }),
        ),
    );

    let hrr = an.hrr();
    checks.insert(
        "hrr".to_string(),
        CheckResult::new(
            hrr.verdict,
            hrr.margin,
            json!({
                "primitive_dimension": hrr.primitive_dimension,
                "expected_dimension": hrr.expected_dimension,
                "lambda_min": hrr.lambda_min,
                "gram_norm": hrr.gram_norm,
                "signature": hrr.report.signature,
            }),
        ),
    );

    let ld = an.ld(&hl);
    checks.insert(
        "ld".to_string(),
        CheckResult::new(
            ld.verdict,
            tol.orthogonality - ld.orthogonality_residual,
            serde_json::to_value(&ld).expect("plain data"),
        ),
    );

    let le = match an.local_estimate(&hrr) {
        Ok(est) => {
            let worst = if opts.samples > 0 {
                Some(local_estimate_sampling(inst, &est, opts.samples, opts.seed))
            } else {
                None
            };
            let sampled_ok = worst.is_none_or(|w| w <= SAMPLING_SLACK);
            CheckResult::new(
                est.certified && sampled_ok,
                est.certificate_min_eigenvalue + tol.certificate,
                json!({
                    "c1": est.c1,
                    "c2": est.c2,
                    "certificate_min_eigenvalue": est.certificate_min_eigenvalue,
                    "samples": opts.samples,
                    "worst_sample_violation": worst,
                }),
            )
        }
        Err(e) => CheckResult::new(
            false,
            f64::NEG_INFINITY,
            json!({ "precondition_failed": e.to_string() }),
        ),
    };
    checks.insert("local_estimate".to_string(), le);

    if opts.steps >= 2 {
        let hs = homotopy_sweep(inst, opts.steps, tol).expect("steps checked");
        checks.insert("homotopy".to_string(), homotopy_check(&hs));
    }

    let all_pass = checks.values().all(|c| c.verdict);
    VerificationReport {
        n: inst.n,
        m: inst.m,
        p: inst.p,
        q: inst.q,
        checks,
        warnings: hypothesis_warnings(inst),
        all_pass,
    }
}

fn homotopy_check(hs: &HomotopyReport) -> CheckResult {
    CheckResult::new(
        hs.verdict,
        hs.margin,
        json!({
            "steps": hs.points.len(),
            "constant_signature": hs.constant_signature,
            "points": hs.points,
        }),
    )
}

/// Which `(n, m, p, q)` tuples a sweep covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    /// Every `0 ≤ p, q` with `p + q ≤ m ≤ n`.
    #[default]
    All,
    /// Only `m = n`.
    Classical,
    /// Only `m < n`.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default)]
    pub constraint: Constraint,
    /// Explicit `[n, m, p, q]` tuples; overrides the range and constraint.
    #[serde(default)]
    pub tuples: Option<Vec<[usize; 4]>>,
    pub count: usize,
    pub seed: u64,
    /// Rank threshold override.
    #[serde(default)]
    pub tol: Option<f64>,
    pub options: CheckOptions,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_min: 2,
            n_max: 5,
            constraint: Constraint::All,
            tuples: None,
            count: 100,
            seed: 0,
            tol: None,
            options: CheckOptions {
                steps: 0,
                samples: 0,
                seed: 0,
            },
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(ts) = &self.tuples {
            for &[n, m, p, q] in ts {
                if n == 0 || n > 8 || p + q > m || m > n {
                    return Err(Error::InvalidInstance(format!(
                        "tuple (n, m, p, q) = ({n}, {m}, {p}, {q}) violates p + q ≤ m ≤ n ≤ 8"
                    )));
                }
            }
            return Ok(());
        }
        if self.n_min == 0 || self.n_min > self.n_max || self.n_max > 8 {
            return Err(Error::Range(format!(
                "n range {}..={} must lie in 1..=8",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    pub fn tuples(&self) -> Vec<[usize; 4]> {
        if let Some(ts) = &self.tuples {
            return ts.clone();
        }
        let mut out = Vec::new();
        for n in self.n_min..=self.n_max {
            for m in 0..=n {
                let keep = match self.constraint {
                    Constraint::All => true,
                    Constraint::Classical => m == n,
                    Constraint::Degenerate => m < n,
                };
                if !keep {
                    continue;
                }
                for p in 0..=m {
                    for q in 0..=(m - p) {
                        out.push([n, m, p, q]);
                    }
                }
            }
        }
        out
    }

    pub fn tolerance(&self) -> Result<Tolerance> {
        match self.tol {
            Some(t) => Tolerance::with_rank(t),
            None => Ok(Tolerance::default()),
        }
    }
}

/// Generator for the `index`-th instance of a tuple: a ChaCha stream keyed
/// by the master seed, with the tuple and index selecting the stream.
pub fn instance_rng(seed: u64, tuple: [usize; 4], index: usize) -> ChaCha8Rng {
    let [n, m, p, q] = tuple;
    let stream = ((n as u64) << 56)
        | ((m as u64) << 48)
        | ((p as u64) << 40)
        | ((q as u64) << 32)
        | index as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Entry of a sweep's `results` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub tuple: [usize; 4],
    pub index: usize,
    pub report: VerificationReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub checked: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub config: Value,
    pub results: Vec<SweepEntry>,
    pub all_pass: bool,
    pub counters: Counters,
}

impl AggregateReport {
    fn from_results(config: Value, results: Vec<SweepEntry>) -> Self {
        let failed = results.iter().filter(|e| !e.report.all_pass).count();
        AggregateReport {
            config,
            all_pass: failed == 0,
            counters: Counters {
                checked: results.len(),
                failed,
            },
            results,
        }
    }
}

/// Generates `count` random valid instances per tuple and checks each.
pub fn run_sweep(config: &SweepConfig) -> Result<AggregateReport> {
    config.validate()?;
    let tol = config.tolerance()?;
    let jobs: Vec<([usize; 4], usize)> = config
        .tuples()
        .into_iter()
        .flat_map(|t| (0..config.count).map(move |i| (t, i)))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(tuple, index)| {
            let [n, m, p, q] = tuple;
            let inst = Instance::random(n, m, p, q, &mut instance_rng(config.seed, tuple, index))?;
            let opts = CheckOptions {
                seed: config.options.seed ^ index as u64,
                ..config.options
            };
            Ok(SweepEntry {
                tuple,
                index,
                report: run_checks(&inst, &opts, &tol),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AggregateReport::from_results(
        serde_json::to_value(config).expect("plain data"),
        results,
    ))
}

/// Linear model of a submersion `f: X → Y_1 × …`: each `α_j` is a Kähler
/// form of the base placed in the leading `m × m` block, so it is
/// semipositive of rank exactly `m` and constant along the fibre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibrationModel {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub q: usize,
    pub base_forms: Vec<HermitianOneOneForm>,
    pub fiber_form: HermitianOneOneForm,
}

impl FibrationModel {
    pub fn validate(&self) -> Result<()> {
        let (n, m, p, q) = (self.n, self.m, self.p, self.q);
        if m == 0 || m > n || p + q > m {
            return Err(Error::InvalidInstance(format!(
                "fibration needs 1 ≤ m ≤ n and p + q ≤ m, got (n, m, p, q) = ({n}, {m}, {p}, {q})"
            )));
        }
        if self.base_forms.len() != m - p - q + 1 {
            return Err(Error::InvalidInstance(format!(
                "expected {} base forms, got {}",
                m - p - q + 1,
                self.base_forms.len()
            )));
        }
        if self.fiber_form.n() != n {
            return Err(Error::InvalidInstance(format!(
                "fiber form must be {n}x{n}"
            )));
        }
        check_kahler(&self.fiber_form)
            .map_err(|e| Error::InvalidInstance(format!("fiber form: {e}")))?;
        for (j, b) in self.base_forms.iter().enumerate() {
            if b.n() != m {
                return Err(Error::InvalidInstance(format!(
                    "base form {} must be {m}x{m}",
                    j + 1
                )));
            }
            check_kahler(b)
                .map_err(|e| Error::InvalidInstance(format!("base form {}: {e}", j + 1)))?;
        }
        Ok(())
    }

    /// The pullback `α_j`: the base form in the leading block, zero elsewhere.
    pub fn pullback(&self, j: usize) -> HermitianOneOneForm {
        let b = self.base_forms[j].matrix();
        let m = self.m;
        let mat = CMat::from_fn(self.n, self.n, |r, c| {
            if r < m && c < m {
                b[(r, c)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        HermitianOneOneForm::new(mat).expect("block of a Hermitian matrix")
    }

    /// The instance with `ω = ω_X` and `α_j = f^*ω_{Y_j}`, validated, with
    /// every `α_j` confirmed to have rank exactly `m`.
    pub fn to_instance(&self) -> Result<Instance> {
        self.validate()?;
        let alphas: Vec<HermitianOneOneForm> = (0..self.base_forms.len())
            .map(|j| self.pullback(j))
            .collect();
        for (j, a) in alphas.iter().enumerate() {
            let r = rank(a);
            if r != self.m {
                return Err(Error::InvalidInstance(format!(
                    "pullback {} has rank {r}, expected {}",
                    j + 1,
                    self.m
                )));
            }
        }
        Instance::new(
            self.n,
            self.m,
            self.p,
            self.q,
            self.fiber_form.clone(),
            alphas,
        )
    }

    pub fn random<R: Rng + ?Sized>(
        n: usize,
        m: usize,
        p: usize,
        q: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if m == 0 || m > n || p + q > m {
            return Err(Error::InvalidInstance(format!(
                "fibration needs 1 ≤ m ≤ n and p + q ≤ m, got ({n}, {m}, {p}, {q})"
            )));
        }
        let fiber_form = random_kahler(n, rng);
        let base_forms = (0..m - p - q + 1).map(|_| random_kahler(m, rng)).collect();
        Ok(FibrationModel {
            n,
            m,
            p,
            q,
            base_forms,
            fiber_form,
        })
    }
}

pub fn check_fibration(
    model: &FibrationModel,
    opts: &CheckOptions,
    tol: &Tolerance,
) -> Result<VerificationReport> {
    let inst = model.to_instance()?;
    Ok(run_checks(&inst, opts, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Products of Kähler forms with signed perturbations as `Ω`.
    ArbitraryOmega,
    /// Common orthonormal bases inside `∩ P(α_j)` for merely `m`-positive tuples.
    BasisIntersection,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arbitrary-omega" => Ok(SearchMode::ArbitraryOmega),
            "basis-intersection" => Ok(SearchMode::BasisIntersection),
            other => Err(Error::Parse(format!(
                "unknown search mode {other:?}; expected arbitrary-omega or basis-intersection"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub budget: usize,
    pub seed: u64,
    /// Size of the signed perturbation relative to the Kähler part; 0 keeps
    /// every factor Kähler.
    pub perturbation: f64,
    /// Random unitary bases tried per tuple in basis-intersection mode.
    pub candidates: usize,
}

impl SearchConfig {
    pub fn new(mode: SearchMode, budget: usize, seed: u64) -> Self {
        SearchConfig {
            mode,
            budget,
            seed,
            perturbation: 1.0,
            candidates: 64,
        }
    }
}

/// A recorded observation with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Finding {
    ArbitraryOmega {
        index: usize,
        instance: Instance,
        hl: bool,
        hrr: bool,
        hl_ratio: f64,
        hrr_margin: f64,
    },
    BasisIntersection {
        index: usize,
        n: usize,
        m: usize,
        omega: HermitianOneOneForm,
        alphas: Vec<HermitianOneOneForm>,
        candidates_tried: usize,
        /// Best over candidates of `min_{j,i} value_j(e_i) / tr Φ_j`.
        best_margin: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub samples: usize,
    pub findings: Vec<Finding>,
}

/// Looks for linear-level failures outside the theorem's hypotheses. Every
/// outcome, including no findings at all, is an observation.
pub fn run_search(config: &SearchConfig, tol: &Tolerance) -> Result<SearchReport> {
    if !(config.perturbation.is_finite() && config.perturbation >= 0.0) {
        return Err(Error::Range(
            "perturbation must be a finite non-negative number".into(),
        ));
    }
    let findings: Vec<Option<Finding>> = (0..config.budget)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(index as u64);
            match config.mode {
                SearchMode::ArbitraryOmega => {
                    search_arbitrary_omega(index, config.perturbation, tol, &mut rng)
                }
                SearchMode::BasisIntersection => {
                    search_basis_intersection(index, config.candidates, &mut rng)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport {
        config: *config,
        samples: config.budget,
        findings: findings.into_iter().flatten().collect(),
    })
}

fn search_arbitrary_omega(
    index: usize,
    perturbation: f64,
    tol: &Tolerance,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Finding>> {
    let n = rng.random_range(2..=4usize);
    let m = rng.random_range(1..=n);
    let p = rng.random_range(0..=m);
    let q = rng.random_range(0..=(m - p));
    let omega = random_kahler(n, rng);
    let k = m - p - q;
    let mut alphas = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let base = random_kahler(n, rng);
        // the last factor cuts out P and stays Kähler
        if j == k || perturbation == 0.0 {
            alphas.push(base);
        } else {
            let noise = random_hermitian(n, rng);
            let s = perturbation * base.spectral_norm() / noise.spectral_norm().max(1e-300);
            alphas.push(base.add(&noise.scale(s)));
        }
    }
    let inst = Instance::new_unvalidated(n, m, p, q, omega, alphas)?;
    let an = Analysis::new(&inst, tol);
    let hl = an.hl();
    let hrr = an.hrr();
    if hl.holds && hrr.verdict {
        return Ok(None);
    }
    Ok(Some(Finding::ArbitraryOmega {
        index,
        hl: hl.holds,
        hrr: hrr.verdict,
        hl_ratio: hl.ratio,
        hrr_margin: hrr.margin,
        instance: inst,
    }))
}

/// A Hermitian matrix with relative spectrum `(λ_1, …, λ_n)`, `λ_n < 0`,
/// that is `m`-positive against the identity.
fn merely_m_positive<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> HermitianOneOneForm {
    let id = HermitianOneOneForm::identity(n);
    loop {
        let mut lambda: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.2..1.0)).collect();
        lambda.push(-rng.random_range(0.01..1.0));
        let e = elementary_symmetric(&lambda);
        if (1..=m).any(|k| e[k] <= 1e-6) {
            continue;
        }
        let u = random_unitary(n, rng);
        let d = CMat::from_real_diag(&lambda);
        let a = HermitianOneOneForm::new((&(&u * &d) * &u.adjoint()).hermitian_part())
            .expect("conjugated real diagonal");
        if is_m_positive(&a, &id, m)
            .map(|v| v.positive)
            .unwrap_or(false)
        {
            return a;
        }
    }
}

fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    CMat::from_columns(n, &crate::linalg::orthonormalize(&cols, 1e-8))
}

fn search_basis_intersection(
    index: usize,
    candidates: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Finding>> {
    let n = rng.random_range(3..=4usize);
    let m = rng.random_range(1..=n - 1);
    let count = rng.random_range(2..=3usize);
    let omega = HermitianOneOneForm::identity(n);
    let alphas: Vec<HermitianOneOneForm> =
        (0..count).map(|_| merely_m_positive(n, m, rng)).collect();
    let grams = alphas
        .iter()
        .map(|a| hyperplane_gram(a, &omega, m))
        .collect::<Result<Vec<_>>>()?;
    let score = |basis: &CMat| -> f64 {
        grams
            .iter()
            .flat_map(|g| {
                let scale = g.trace().re.abs().max(1e-300);
                (0..n).map(move |i| gram_value(g, &basis.column(i)) / scale)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = score(&CMat::identity(n));
    let mut tried = 1;
    while best <= 1e-10 && tried < candidates.max(1) {
        best = best.max(score(&random_unitary(n, rng)));
        tried += 1;
    }
    if best > 1e-10 {
        return Ok(None);
    }
    Ok(Some(Finding::BasisIntersection {
        index,
        n,
        m,
        omega,
        alphas,
        candidates_tried: tried,
        best_margin: best,
    }))
}

/// Restriction of an instance's polarizations to one hyperplane.
#[derive(Debug, Clone, Serialize)]
pub struct RestrictReport {
    pub hyperplane: Hyperplane,
    /// Per polarization and per `k = 1..n-1`, the relative identity residual.
    pub identity_residuals: Vec<Vec<f64>>,
    pub identity_ok: bool,
    /// Each `α_j|_H` is `(m-1)`-positive against `ω|_H` (vacuous for `m ≤ 1`).
    pub lower_positivity: Vec<bool>,
    /// `Some(v ∉ S(α_j))` when the locus is defined (`1 ≤ m ≤ n - 1`).
    pub outside_locus: Vec<Option<bool>>,
    /// `m`-positivity of `α_j|_H`, when the locus is defined.
    pub restricted_m_positive: Vec<Option<bool>>,
    pub warnings: Vec<String>,
    pub all_pass: bool,
}

pub fn restrict_instance(inst: &Instance, h: &Hyperplane) -> Result<RestrictReport> {
    let n = inst.n;
    if h.n() != n {
        return Err(Error::Dimension(format!(
            "hyperplane lives in C^{}, instance in C^{n}",
            h.n()
        )));
    }
    if n < 2 {
        return Err(Error::Range("restriction needs n ≥ 2".into()));
    }
    let m = inst.m;
    let mut warnings = Vec::new();
    if m >= n {
        warnings.push(format!(
            "m = n = {n}: the degeneracy locus is undefined; only the plain restriction is reported"
        ));
    }
    let rw = restrict_hermitian(&inst.omega, h)?;
    let mut identity_residuals = Vec::new();
    let mut lower_positivity = Vec::new();
    let mut outside_locus = Vec::new();
    let mut restricted_m_positive = Vec::new();
    for a in &inst.alphas {
        identity_residuals.push(
            (1..n)
                .map(|k| restriction_identity(a, &inst.omega, k, h).map(|r| r.relative))
                .collect::<Result<Vec<_>>>()?,
        );
        let ra = restrict_hermitian(a, h)?;
        lower_positivity.push(if m >= 2 {
            is_m_positive(&ra, &rw, (m - 1).min(n - 1))?.positive
        } else {
            true
        });
        if m >= 1 && m < n {
            let locus = degeneracy_locus(a, &inst.omega, m)?;
            outside_locus.push(Some(!locus.contains(h.covector())));
            restricted_m_positive.push(Some(is_m_positive(&ra, &rw, m)?.positive));
        } else {
            outside_locus.push(None);
            restricted_m_positive.push(None);
        }
    }
    let identity_ok = identity_residuals
        .iter()
        .flatten()
        .all(|&r| r < IDENTITY_TOL);
    let bullet_two = outside_locus
        .iter()
        .zip(&restricted_m_positive)
        .all(|(o, r)| !matches!((o, r), (Some(true), Some(false))));
    let all_pass = identity_ok && lower_positivity.iter().all(|&b| b) && bullet_two;
    Ok(RestrictReport {
        hyperplane: h.clone(),
        identity_residuals,
        identity_ok,
        lower_positivity,
        outside_locus,
        restricted_m_positive,
        warnings,
        all_pass,
    })
}

/// A hyperplane with a Gaussian covector.
pub fn random_hyperplane<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Hyperplane {
    let v = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    Hyperplane::new(v).expect("Gaussian covector is nonzero")
}
