//! Small dense complex linear algebra.
//!
//! Everything here works on matrices of dimension at most a few hundred, so
//! the routines favour robustness over asymptotic speed: a cyclic Jacobi
//! solver for Hermitian eigenpairs, a tridiagonal QL path when only the
//! spectrum is needed, and a one-sided (Hestenes) Jacobi SVD for ranks and
//! kernels.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

/// Relative off-diagonal Frobenius mass at which the Hermitian Jacobi
/// iteration stops.
pub const JACOBI_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Complex64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> CMat {
        CMat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])])
    }

    /// Top-left `r x c` block.
    pub fn leading_block(&self, r: usize, c: usize) -> CMat {
        assert!(r <= self.rows && c <= self.cols);
        CMat::from_fn(r, c, |i, j| self[(i, j)])
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> CMat {
        assert!(self.is_square());
        CMat::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Largest entry of `|A - A†|`.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut d: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                d = d.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `x† A x`, real part only (callers use this on Hermitian matrices).
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        let ax = self.mul_vec(x);
        dot_c(x, &ax).re
    }

    /// Spectral norm through the singular values.
    pub fn spectral_norm(&self) -> f64 {
        svd(self).values.first().copied().unwrap_or(0.0)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Hermitian inner product `Σ conj(x_i) y_i`.
pub fn dot_c(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Bilinear pairing `Σ x_i y_i` (the `v·z` of a hyperplane equation).
pub fn dot_bilinear(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn norm_c(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Spectrum of a Hermitian matrix, eigenvalues ascending, eigenvectors in the
/// matching columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized first; iteration stops once the off-diagonal
/// Frobenius mass is below [`JACOBI_TOL`] times the Frobenius norm.
pub fn hermitian_eigen(a: &CMat) -> HermitianEigen {
    assert!(a.is_square(), "eigen of non-square matrix");
    let n = a.rows;
    let mut m = a.hermitian_part();
    let mut v = CMat::identity(n);
    let norm = m.frobenius_norm();

    if norm > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in 0..n {
                    if p != q {
                        off += m[(p, q)].norm_sqr();
                    }
                }
            }
            if off.sqrt() <= JACOBI_TOL * norm {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = m[(p, q)];
                    let r = apq.norm();
                    if r <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let (c, s) = jacobi_cs(m[(p, p)].re, m[(q, q)].re, r);
                    let ph = apq / r;
                    rotate(&mut m, &mut v, p, q, c, s, ph);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    HermitianEigen {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: v.select_columns(&order),
    }
}

/// Eigenvalues of a Hermitian matrix, ascending, without eigenvectors.
///
/// Householder reduction to a real symmetric tridiagonal matrix followed by
/// implicit QL with Wilkinson shifts. Much cheaper than [`hermitian_eigen`]
/// when only the spectrum is needed.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    assert!(a.is_square(), "eigen of non-square matrix");
    let n = a.rows;
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.hermitian_part();
    let zero = Complex64::new(0.0, 0.0);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| m[(i, k)]).collect();
        let xn = norm_c(&x);
        d[k] = m[(k, k)].re;
        if xn == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let ph = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -ph * xn;
        let mut v = x.clone();
        v[0] -= beta;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        e[k] = xn;
        if vn2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vn2;
        let sz = n - k - 1;
        // p = tau A22 v, then q = p - (tau/2)(v† p) v
        let mut pv = vec![zero; sz];
        for (i, pi) in pv.iter_mut().enumerate() {
            let row = &m.row(k + 1 + i)[k + 1..];
            let acc: Complex64 = row.iter().zip(&v).map(|(a, b)| a * b).sum();
            *pi = acc * tau;
        }
        let kk = dot_c(&v, &pv) * (0.5 * tau);
        let qv: Vec<Complex64> = pv.iter().zip(&v).map(|(p, vi)| p - kk * vi).collect();
        for i in 0..sz {
            for j in 0..sz {
                let upd = v[i] * qv[j].conj() + qv[i] * v[j].conj();
                m[(k + 1 + i, k + 1 + j)] -= upd;
            }
        }
        for i in k + 1..n {
            m[(i, k)] = zero;
            m[(k, i)] = zero;
        }
    }
    if n >= 2 {
        d[n - 2] = m[(n - 2, n - 2)].re;
        e[n - 2] = m[(n - 1, n - 2)].norm();
    }
    d[n - 1] = m[(n - 1, n - 1)].re;
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Implicit QL on a real symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[i] = T[i+1][i]`. Eigenvalues are left in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = mm;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
}

/// Rotation angle for annihilating the `(p, q)` entry of
/// `[[app, r], [r, aqq]]` with `r > 0`.
#[inline]
fn jacobi_cs(app: f64, aqq: f64, r: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

/// Applies `A <- J† A J`, `V <- V J` with
/// `J = [[c, s], [-s conj(ph), c conj(ph)]]` on the `(p, q)` plane.
fn rotate(m: &mut CMat, v: &mut CMat, p: usize, q: usize, c: f64, s: f64, ph: Complex64) {
    let n = m.rows;
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -ph.conj() * s;
    let jqq = ph.conj() * c;
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * jpp + akq * jqp;
        m[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for k in 0..v.rows {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Singular values (descending) and right singular vectors of a matrix.
///
/// `v` is always square with `cols` columns, so kernels of wide matrices are
/// available in full.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value over the column space dimension.
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Numerical rank: singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let cut = rel_tol * self.max();
        self.values.iter().filter(|&&s| s > cut && s > 0.0).count()
    }

    /// Orthonormal kernel basis as columns.
    pub fn kernel(&self, rel_tol: f64) -> CMat {
        let r = self.rank(rel_tol);
        let idx: Vec<usize> = (r..self.values.len()).collect();
        self.v.select_columns(&idx)
    }

    /// Orthonormal basis of the orthogonal complement of the kernel.
    pub fn row_space(&self, rel_tol: f64) -> CMat {
        let r = self.rank(rel_tol);
        let idx: Vec<usize> = (0..r).collect();
        self.v.select_columns(&idx)
    }
}

/// One-sided Jacobi SVD.
///
/// Wide matrices are handled through their adjoint: the right singular
/// vectors of the nonzero part come from the rotated columns of `A†`, and the
/// kernel is the orthogonal complement of their span.
pub fn svd(a: &CMat) -> Svd {
    let (rows, cols) = (a.rows, a.cols);
    if rows >= cols {
        let (values, _, v) = jacobi_columns(a.columns(), true);
        return Svd {
            values,
            v: CMat::from_columns(cols, &v),
        };
    }
    let (values, w, _) = jacobi_columns(a.adjoint().columns(), false);
    let cut = 1e-13 * values.first().copied().unwrap_or(0.0);
    let mut seed: Vec<Vec<Complex64>> = values
        .iter()
        .zip(&w)
        .take_while(|(&s, _)| s > cut && s > 0.0)
        .map(|(&s, c)| c.iter().map(|z| z / s).collect())
        .collect();
    let r = seed.len();
    seed.extend(CMat::identity(cols).columns());
    let mut v = orthonormalize(&seed, 1e-8);
    v.truncate(cols);
    let mut values: Vec<f64> = values[..r].to_vec();
    values.resize(cols, 0.0);
    Svd {
        values,
        v: CMat::from_columns(cols, &v),
    }
}

/// Rotates columns until pairwise orthogonal. Returns the column norms in
/// descending order with the matching rotated columns and, when requested,
/// the accumulated rotation.
fn jacobi_columns(
    mut w: Vec<Vec<Complex64>>,
    track: bool,
) -> (Vec<f64>, Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    const EPS: f64 = 1e-15;
    let cols = w.len();
    let mut v: Vec<Vec<Complex64>> = if track {
        CMat::identity(cols).columns()
    } else {
        Vec::new()
    };
    let total: f64 = w.iter().flatten().map(|z| z.norm_sqr()).sum();
    // columns below this mass are numerically zero and left alone
    let negligible = (EPS * EPS) * total;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        let mut mass: Vec<f64> = w
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
            .collect();
        for j in 0..cols {
            for k in (j + 1)..cols {
                let (alpha, beta) = (mass[j], mass[k]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot_c(&w[j], &w[k]);
                let g = gamma.norm();
                if g == 0.0 || g <= EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s) = jacobi_cs(alpha, beta, g);
                let t = s / c;
                mass[j] = (alpha - t * g).max(0.0);
                mass[k] = beta + t * g;
                let kph = (gamma / g).conj();
                let targets: &mut [&mut Vec<Vec<Complex64>>] = if track {
                    &mut [&mut w, &mut v]
                } else {
                    &mut [&mut w]
                };
                for col in targets.iter_mut() {
                    let (left, right) = col.split_at_mut(k);
                    let (cj, ck) = (&mut left[j], &mut right[0]);
                    for (x, y) in cj.iter_mut().zip(ck.iter_mut()) {
                        let xj = *x;
                        let yk = *y;
                        *x = xj * c - kph * yk * s;
                        *y = xj * s + kph * yk * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|c| norm_c(c)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let values = order.iter().map(|&i| norms[i]).collect();
    let w_sorted = order.iter().map(|&i| w[i].clone()).collect();
    let v_sorted = if track {
        order.iter().map(|&i| v[i].clone()).collect()
    } else {
        Vec::new()
    };
    (values, w_sorted, v_sorted)
}

/// Lower-triangular `L` with `A = L L†` and positive real diagonal, or `None`
/// when a pivot is not positive relative to the matrix scale.
pub fn cholesky(a: &CMat) -> Option<CMat> {
    assert!(a.is_square());
    let n = a.rows;
    let scale = a.max_abs();
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 1e-14 * scale {
            return None;
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Some(l)
}

/// Inverse of a nonsingular lower-triangular matrix by forward substitution.
pub fn lower_triangular_inverse(l: &CMat) -> CMat {
    let n = l.rows;
    let mut inv = CMat::zeros(n, n);
    for col in 0..n {
        for i in col..n {
            let mut s = if i == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            for k in col..i {
                s -= l[(i, k)] * inv[(k, col)];
            }
            inv[(i, col)] = s / l[(i, i)];
        }
    }
    inv
}

/// Orthonormalizes vectors with two passes of modified Gram-Schmidt, dropping
/// any vector whose residual norm falls below `drop_tol` times its original norm.
pub fn orthonormalize(vectors: &[Vec<Complex64>], drop_tol: f64) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let n0 = norm_c(v);
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let proj = dot_c(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= proj * ui;
                }
            }
        }
        let nw = norm_c(&w);
        if nw > drop_tol * n0 {
            out.push(w.into_iter().map(|z| z / nw).collect());
        }
    }
    out
}

/// Counts of eigenvalues above, below and within `±rel_tol·scale`.
pub fn inertia(values: &[f64], rel_tol: f64) -> (usize, usize, usize) {
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let cut = rel_tol * scale;
    let pos = values.iter().filter(|&&v| v > cut).count();
    let neg = values.iter().filter(|&&v| v < -cut).count();
    (pos, neg, values.len() - pos - neg)
}
