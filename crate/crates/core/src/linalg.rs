//! Dense row-major matrices and the small set of factorizations the toolkit needs:
//! one-sided Jacobi SVD, cyclic Jacobi for symmetric eigenproblems, and
//! modified Gram-Schmidt with reorthogonalization.

use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix data has {found} entries, expected {rows}x{cols} = {}", rows * cols)]
    ShapeMismatch { rows: usize, cols: usize, found: usize },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("ragged input: row {index} has length {found}, expected {expected}")]
    Ragged { index: usize, expected: usize, found: usize },
    #[error("incompatible shapes: {0}")]
    Incompatible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix has no singular value above the rank threshold")]
    NoPositiveSingularValue,
    #[error("columns are not orthonormal: max |B^T B - I| = {deviation:e} exceeds {tol:e}")]
    NotOrthonormal { deviation: f64, tol: f64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Rectangular matrix of finite reals stored in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch { rows, cols, found: data.len() });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite { row: pos / cols.max(1), col: pos % cols.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

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

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (index, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Ragged { index, expected: cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Result<Self, MatrixError> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(MatrixError::Ragged { index: j, expected: rows, found: col.len() });
            }
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        if m.data.iter().any(|x| !x.is_finite()) {
            return Err(MatrixError::InvalidArgument("non-finite column entry".into()));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product `self * other`. Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len(), "matvec dimension");
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// `self^T * y`.
    pub fn tr_matvec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(self.rows, y.len(), "tr_matvec dimension");
        let mut out = vec![T::zero(); self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        out
    }

    /// `self^T * self`.
    pub fn gram(&self) -> Self {
        let mut g = Self::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                let ri = row[i];
                if ri == T::zero() {
                    continue;
                }
                for (j, &rj) in row.iter().enumerate().skip(i) {
                    g.data[i * self.cols + j] += ri * rj;
                }
            }
        }
        for i in 0..self.cols {
            for j in 0..i {
                g.data[i * self.cols + j] = g.data[j * self.cols + i];
            }
        }
        g
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)];
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, data }
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * factor).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "sub shapes");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shapes");
        self.data.iter().zip(&other.data).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn frobenius_norm(&self) -> T {
        norm2(&self.data)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn append_row(&mut self, row: &[T]) {
        assert_eq!(row.len(), self.cols, "append_row length");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> T {
        svd(self).singular_values.first().copied().unwrap_or_else(T::zero)
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm2<T: Scalar>(v: &[T]) -> T {
    // scaled to avoid overflow on large entries
    let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let ss = v.iter().fold(T::zero(), |acc, &x| {
        let y = x / scale;
        acc + y * y
    });
    scale * ss.sqrt()
}

pub fn norm1<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc + x.abs())
}

pub fn norm_inf<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    assert_eq!(a.len(), b.len(), "vector lengths");
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    assert_eq!(a.len(), b.len(), "vector lengths");
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn scale<T: Scalar>(a: &[T], factor: T) -> Vec<T> {
    a.iter().map(|&x| x * factor).collect()
}

/// `y += alpha * x`
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Singular value decomposition `A = U diag(s) V^T` with the full right factor.
///
/// `singular_values` has one entry per column of `A`, sorted in decreasing
/// order; `v` is `cols x cols` orthogonal with column `j` paired to
/// `singular_values[j]`. Column `j` of `u` is `A v_j / s_j`, or zero when
/// `s_j` vanishes.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub singular_values: Vec<T>,
    pub u: DenseMatrix<T>,
    pub v: DenseMatrix<T>,
}

impl<T: Scalar> Svd<T> {
    /// Number of singular values above `rel_tol * largest`.
    pub fn rank(&self, rel_tol: T) -> usize {
        let cutoff = self.threshold(rel_tol);
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn threshold(&self, rel_tol: T) -> T {
        rel_tol * self.singular_values.first().copied().unwrap_or_else(T::zero)
    }
}

/// One-sided Jacobi SVD. Works for any shape; accuracy is high even for
/// wide matrices, which matters because kernels are read off the right factor.
pub fn svd<T: Scalar>(a: &DenseMatrix<T>) -> Svd<T> {
    let (m, n) = a.shape();
    // column-major working copy: w[j] is column j of A V
    let mut w: Vec<Vec<T>> = a.columns();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            e
        })
        .collect();
    let eps = T::epsilon();
    let negligible = {
        let f = a.frobenius_norm();
        let t = eps * f * T::of(4.0);
        t * t
    };
    let conv = eps * T::of_usize(m.max(n).max(1));
    let mut norms: Vec<T> = w.iter().map(|c| dot(c, c)).collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&w[p], &w[q]);
                if gamma.abs() <= conv * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (wp, wq) = two_mut(&mut w, p, q);
                rotate(wp, wq, c, s);
                let (vp, vq) = two_mut(&mut v, p, q);
                rotate(vp, vq, c, s);
                norms[p] = dot(&w[p], &w[p]);
                norms[q] = dot(&w[q], &w[q]);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let sv: Vec<T> = w.iter().map(|c| norm2(c)).collect();
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
    let singular_values: Vec<T> = order.iter().map(|&j| sv[j]).collect();
    let mut u = DenseMatrix::zeros(m, n);
    let mut vm = DenseMatrix::zeros(n, n);
    let smax = singular_values.first().copied().unwrap_or_else(T::zero);
    for (k, &j) in order.iter().enumerate() {
        let s = sv[j];
        if s > smax * eps * T::of_usize(n.max(1)) && s > T::zero() {
            for i in 0..m {
                u[(i, k)] = w[j][i] / s;
            }
        }
        for i in 0..n {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd { singular_values, u, v: vm }
}

fn rotate<T: Scalar>(x: &mut [T], y: &mut [T], c: T, s: T) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let xa = *a;
        let yb = *b;
        *a = c * xa - s * yb;
        *b = s * xa + c * yb;
    }
}

fn two_mut<V>(v: &mut [V], p: usize, q: usize) -> (&mut V, &mut V) {
    debug_assert!(p < q);
    let (lo, hi) = v.split_at_mut(q);
    (&mut lo[p], &mut hi[0])
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching eigenvectors as
/// columns.
pub fn symmetric_eigen<T: Scalar>(a: &DenseMatrix<T>) -> (Vec<T>, DenseMatrix<T>) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "symmetric_eigen needs a square matrix");
    let mut m = a.clone();
    let mut vecs = DenseMatrix::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + m[(i, j)] * m[(i, j)]);
        let diag: T = (0..n).fold(T::zero(), |acc, i| acc + m[(i, i)] * m[(i, i)]);
        if off <= eps * eps * diag.max(T::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = vecs[(k, p)];
                    let vkq = vecs[(k, q)];
                    vecs[(k, p)] = c * vkp - s * vkq;
                    vecs[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].partial_cmp(&m[(j, j)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = vecs.select_columns(&order);
    (values, vectors)
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
///
/// Each candidate is orthogonalized against `fixed` (assumed orthonormal) and
/// the vectors accepted so far; candidates whose residual norm falls below
/// `drop_tol` are discarded. Returns the accepted, normalized vectors.
pub fn gram_schmidt<T: Scalar>(fixed: &[Vec<T>], candidates: &[Vec<T>], drop_tol: T) -> Vec<Vec<T>> {
    let mut accepted: Vec<Vec<T>> = Vec::new();
    for cand in candidates {
        let mut r = cand.clone();
        for _pass in 0..2 {
            for q in fixed.iter().chain(accepted.iter()) {
                let h = dot(q, &r);
                axpy(-h, q, &mut r);
            }
        }
        let nr = norm2(&r);
        if nr >= drop_tol {
            accepted.push(scale(&r, T::one() / nr));
        }
    }
    accepted
}
