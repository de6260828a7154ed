//! Dense symmetric linear algebra for exact GP inference.
//!
//! Everything here is small and direct: an unpivoted Cholesky with a bounded
//! jitter ladder, forward/back substitution, and the quantities exact GP
//! regression derives from the factor (solves, log-determinant, quadratic form).

use std::ops::{Index, IndexMut};

use crate::error::{GpError, Result};
use crate::scalar::Scalar;

/// Number of escalations after `base_jitter` (×10 each).
const JITTER_ESCALATIONS: i32 = 4;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matvec shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Elementwise map into a new matrix.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Elementwise combination of two same-shape matrices.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Square matrix whose entries are exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T>(Matrix<T>);

impl<T: Scalar> SymMatrix<T> {
    /// Fills the upper triangle from `f` and mirrors it.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if n == 0 {
            return Err(GpError::EmptyInput);
        }
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(Self(m))
    }

    /// Wraps a matrix, checking it is square, nonempty and exactly symmetric.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if m.rows() == 0 {
            return Err(GpError::EmptyInput);
        }
        if m.rows() != m.cols() {
            return Err(GpError::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        for i in 0..m.rows() {
            for j in 0..i {
                if m[(i, j)] != m[(j, i)] {
                    return Err(GpError::InvalidModel(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    /// Adds `d[i]` to diagonal entry `i`.
    pub fn add_diagonal(&mut self, d: &[T]) {
        assert_eq!(d.len(), self.dim());
        for (i, &v) in d.iter().enumerate() {
            self.0[(i, i)] += v;
        }
    }

    pub fn add_scaled_identity(&mut self, s: T) {
        for i in 0..self.dim() {
            self.0[(i, i)] += s;
        }
    }
}

impl<T> Index<(usize, usize)> for SymMatrix<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize)) -> &T {
        &self.0[idx]
    }
}

/// Lower Cholesky factor `L` with `L·Lᵀ = A + jitter_used·I`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholFactor<T> {
    lower: Matrix<T>,
    jitter_used: T,
}

/// Plain Cholesky–Banachiewicz on `a + jitter·I`; `None` on a non-positive pivot.
fn try_cholesky<T: Scalar>(a: &SymMatrix<T>, jitter: T) -> Option<Matrix<T>> {
    let n = a.dim();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[(i, j)];
            if i == j {
                sum += jitter;
            }
            for k in 0..j {
                sum -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if !(sum > T::zero()) || !sum.is_finite() {
                    return None;
                }
                l[(i, i)] = sum.sqrt();
            } else {
                l[(i, j)] = sum / l[(j, j)];
            }
        }
    }
    Some(l)
}

/// Factors `m + j·I` for the smallest `j` in `{0, b, 10b, …, 1e4·b}` that works.
pub fn cholesky_with_jitter<T: Scalar>(m: &SymMatrix<T>, base_jitter: T) -> Result<CholFactor<T>> {
    assert!(base_jitter >= T::zero(), "base_jitter must be nonnegative");
    let mut ladder = vec![T::zero()];
    if base_jitter > T::zero() {
        let ten = T::lit(10.0);
        ladder.extend((0..=JITTER_ESCALATIONS).map(|k| base_jitter * ten.powi(k)));
    }
    for &jitter in &ladder {
        if let Some(lower) = try_cholesky(m, jitter) {
            return Ok(CholFactor { lower, jitter_used: jitter });
        }
    }
    Err(GpError::NotPositiveDefinite { jitter: ladder.last().map_or(0.0, |j| j.as_f64()) })
}

/// Cholesky of a positive *semi*definite matrix: pivots within
/// `n·1e-12·max(diag)` of zero get a zero column instead of failing.
///
/// Returns `None` if a pivot is clearly negative. The result is not a
/// [`CholFactor`] because its diagonal may contain zeros; it is only suitable
/// for drawing correlated samples, never for solves.
pub fn cholesky_semidefinite<T: Scalar>(a: &SymMatrix<T>) -> Option<Matrix<T>> {
    let n = a.dim();
    let max_diag = (0..n).fold(T::zero(), |m, i| m.max(a[(i, i)].abs()));
    let tol = T::from_usize_lossy(n) * T::lit(1e-12).max(T::epsilon()) * max_diag;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d < -tol || !d.is_finite() {
            return None;
        }
        if d <= tol {
            continue;
        }
        let pivot = d.sqrt();
        l[(j, j)] = pivot;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / pivot;
        }
    }
    Some(l)
}

/// Forward substitution: solves `L·x = b` for lower-triangular `L`.
pub fn tri_solve_lower<T: Scalar>(l: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = l.rows();
    if b.len() != n {
        return Err(GpError::DimensionMismatch { expected: n, got: b.len() });
    }
    let mut x = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    Ok(x)
}

/// Back substitution against the transpose: solves `Lᵀ·x = b`.
pub fn tri_solve_lower_transpose<T: Scalar>(l: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = l.rows();
    if b.len() != n {
        return Err(GpError::DimensionMismatch { expected: n, got: b.len() });
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    Ok(x)
}

impl<T: Scalar> CholFactor<T> {
    pub fn lower(&self) -> &Matrix<T> {
        &self.lower
    }

    pub fn jitter_used(&self) -> T {
        self.jitter_used
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    /// `(L·Lᵀ)⁻¹ b` via two triangular solves.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let z = tri_solve_lower(&self.lower, b)?;
        tri_solve_lower_transpose(&self.lower, &z)
    }

    /// `ln |L·Lᵀ| = 2 Σ ln L_ii`.
    pub fn log_det(&self) -> T {
        let two = T::lit(2.0);
        (0..self.dim()).fold(T::zero(), |acc, i| acc + two * self.lower[(i, i)].ln())
    }

    /// `yᵀ (L·Lᵀ)⁻¹ y`, computed as `‖L⁻¹y‖²` so it is never negative.
    pub fn quadratic_form(&self, y: &[T]) -> Result<T> {
        let z = tri_solve_lower(&self.lower, y)?;
        Ok(dot(&z, &z))
    }

    /// Explicit `(L·Lᵀ)⁻¹`, symmetrized.
    pub fn inverse(&self) -> Matrix<T> {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e[j] = T::one();
            let col = self.solve(&e).expect("dimension matches");
            e[j] = T::zero();
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        let half = T::lit(0.5);
        Matrix::from_fn(n, n, |i, j| half * (inv[(i, j)] + inv[(j, i)]))
    }

    /// `L·Lᵀ`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.lower.matmul(&self.lower.transpose())
    }
}

pub fn solve_psd<T: Scalar>(f: &CholFactor<T>, b: &[T]) -> Result<Vec<T>> {
    f.solve(b)
}

pub fn log_det_from_chol<T: Scalar>(f: &CholFactor<T>) -> T {
    f.log_det()
}

pub fn quadratic_form<T: Scalar>(f: &CholFactor<T>, y: &[T]) -> Result<T> {
    f.quadratic_form(y)
}
