//! Sensing-matrix construction and subspace utilities.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{dot, gram_schmidt, norm2, svd, DenseMatrix, MatrixError};
use crate::scalar::Scalar;

/// Default relative threshold below which singular values count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Residual norm under which a completion candidate is discarded.
pub const COMPLETION_DROP_TOL: f64 = 1e-8;

/// Complex matrix kept as separate real and imaginary row-major parts.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDenseMatrix<T> {
    real: DenseMatrix<T>,
    imag: DenseMatrix<T>,
}

impl<T: Scalar> ComplexDenseMatrix<T> {
    pub fn new(real: DenseMatrix<T>, imag: DenseMatrix<T>) -> Result<Self, MatrixError> {
        if real.shape() != imag.shape() {
            return Err(MatrixError::Incompatible(format!("real part is {:?}, imaginary part is {:?}", real.shape(), imag.shape())));
        }
        Ok(Self { real, imag })
    }

    pub fn rows(&self) -> usize {
        self.real.rows()
    }

    pub fn cols(&self) -> usize {
        self.real.cols()
    }

    pub fn real_part(&self) -> &DenseMatrix<T> {
        &self.real
    }

    pub fn imag_part(&self) -> &DenseMatrix<T> {
        &self.imag
    }

    /// Applies the matrix to a real vector, returning `(Re(Fx), Im(Fx))`.
    pub fn apply_real(&self, x: &[T]) -> (Vec<T>, Vec<T>) {
        (self.real.matvec(x), self.imag.matvec(x))
    }

    /// `||F x||_2` for real `x`.
    pub fn norm_of_image(&self, x: &[T]) -> T {
        let (re, im) = self.apply_real(x);
        let mut all = re;
        all.extend(im);
        norm2(&all)
    }

    /// Real part of the conjugate-transpose Gram `F^H F`, i.e. `A^T A + B^T B`.
    pub fn real_gram(&self) -> DenseMatrix<T> {
        let a = self.real.gram();
        let b = self.imag.gram();
        let data = a.as_slice().iter().zip(b.as_slice()).map(|(&x, &y)| x + y).collect();
        DenseMatrix::new(a.rows(), a.cols(), data).expect("gram of finite matrices is finite")
    }
}

/// Subspace of `R^ambient_dim` held as an orthonormal column basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: DenseMatrix<T>,
    ortho_tol: T,
}

impl<T: Scalar> Subspace<T> {
    /// Wraps a basis whose columns must be orthonormal within `ortho_tol`.
    pub fn new(basis: DenseMatrix<T>, ortho_tol: T) -> Result<Self, MatrixError> {
        let (ambient_dim, dim) = basis.shape();
        if dim > ambient_dim {
            return Err(MatrixError::InvalidArgument(format!("subspace dimension {dim} exceeds ambient dimension {ambient_dim}")));
        }
        let dev = basis.gram().max_abs_diff(&DenseMatrix::identity(dim));
        if dev > ortho_tol {
            return Err(MatrixError::NotOrthonormal { deviation: dev.as_f64(), tol: ortho_tol.as_f64() });
        }
        Ok(Self { ambient_dim, basis, ortho_tol })
    }

    /// The zero subspace of `R^ambient_dim`.
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: DenseMatrix::zeros(ambient_dim, 0), ortho_tol: T::tol(1e-10) }
    }

    /// Orthonormalizes a spanning set, dropping dependent vectors.
    pub fn span_of(ambient_dim: usize, vectors: &[Vec<T>], drop_tol: T) -> Result<Self, MatrixError> {
        if let Some(bad) = vectors.iter().position(|v| v.len() != ambient_dim) {
            return Err(MatrixError::Ragged { index: bad, expected: ambient_dim, found: vectors[bad].len() });
        }
        let q = gram_schmidt(&[], vectors, drop_tol);
        let basis = DenseMatrix::from_columns(ambient_dim, &q)?;
        Self::new(basis, T::tol(1e-10))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &DenseMatrix<T> {
        &self.basis
    }

    pub fn ortho_tol(&self) -> T {
        self.ortho_tol
    }

    pub fn basis_vectors(&self) -> Vec<Vec<T>> {
        self.basis.columns()
    }

    /// Orthogonal projector `B B^T`.
    pub fn projector(&self) -> DenseMatrix<T> {
        self.basis.matmul(&self.basis.transpose())
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        self.basis.matvec(&self.basis.tr_matvec(v))
    }

    /// `||v - P v||_2`, the distance from `v` to the subspace.
    pub fn residual(&self, v: &[T]) -> T {
        let p = self.project(v);
        norm2(&crate::linalg::sub(v, &p))
    }

    /// Operator-norm distance between the two orthogonal projectors.
    pub fn projector_distance(&self, other: &Self) -> T {
        assert_eq!(self.ambient_dim, other.ambient_dim, "projector_distance ambient dims");
        self.projector().sub(&other.projector()).op_norm()
    }

    /// Embeds into `R^(leading + ambient)` by prepending `leading` zero coordinates.
    pub fn pad_leading(&self, leading: usize) -> Self {
        let n = self.ambient_dim + leading;
        let mut basis = DenseMatrix::zeros(n, self.dim());
        for i in 0..self.ambient_dim {
            for j in 0..self.dim() {
                basis[(leading + i, j)] = self.basis[(i, j)];
            }
        }
        Self { ambient_dim: n, basis, ortho_tol: self.ortho_tol }
    }
}

/// Rows `row_indices` of the unitary-scaled `N x N` DFT, normalized so every
/// column has unit 2-norm: `F[j,k] = exp(-2 pi i r_j k / N) / sqrt(M)`.
pub fn partial_dft<T: Scalar>(n: usize, row_indices: &[usize]) -> Result<ComplexDenseMatrix<T>, MatrixError> {
    if row_indices.is_empty() {
        return Err(MatrixError::InvalidArgument("row_indices must be nonempty".into()));
    }
    let mut seen = vec![false; n];
    for &r in row_indices {
        if r >= n {
            return Err(MatrixError::InvalidArgument(format!("row index {r} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[r], true) {
            return Err(MatrixError::InvalidArgument(format!("duplicate row index {r}")));
        }
    }
    let m = row_indices.len();
    let inv_sqrt_m = 1.0 / (m as f64).sqrt();
    let mut re = DenseMatrix::zeros(m, n);
    let mut im = DenseMatrix::zeros(m, n);
    for (j, &r) in row_indices.iter().enumerate() {
        for k in 0..n {
            // reduce r*k mod N in integers so the phase stays accurate
            let phase = ((r * k) % n) as f64 / n as f64;
            let (s, c) = (2.0 * std::f64::consts::PI * phase).sin_cos();
            re[(j, k)] = T::of(c * inv_sqrt_m);
            im[(j, k)] = T::of(-s * inv_sqrt_m);
        }
    }
    ComplexDenseMatrix::new(re, im)
}

/// Draws `m` distinct row indices uniformly from `1..n` (row 0 is never chosen),
/// returned in ascending order. Deterministic for a given seed.
pub fn sample_rows_excluding_first(n: usize, m: usize, seed: u64) -> Result<Vec<usize>, MatrixError> {
    if n == 0 || m > n - 1 {
        return Err(MatrixError::InvalidArgument(format!("cannot draw {m} rows from 1..{n} without replacement")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = sample(&mut rng, n - 1, m).into_iter().map(|i| i + 1).collect();
    rows.sort_unstable();
    Ok(rows)
}

/// Draws `m` distinct frequencies uniformly from `1..=(n - 1) / 2`, ascending.
///
/// Frequencies `r` and `n - r` give conjugate rows whose real parts coincide,
/// so picking at most one per conjugate pair (and skipping the real Nyquist
/// row) keeps the `2m` realified rows linearly independent.
pub fn sample_conjugate_free_rows(n: usize, m: usize, seed: u64) -> Result<Vec<usize>, MatrixError> {
    let classes = n.saturating_sub(1) / 2;
    if m > classes {
        return Err(MatrixError::InvalidArgument(format!("cannot draw {m} conjugate-free rows for N = {n}; at most {classes} exist")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<usize> = sample(&mut rng, classes, m).into_iter().map(|i| i + 1).collect();
    rows.sort_unstable();
    Ok(rows)
}

/// Stacks the real part above the imaginary part.
pub fn realify<T: Scalar>(f: &ComplexDenseMatrix<T>) -> DenseMatrix<T> {
    f.real_part().vstack(f.imag_part())
}

/// Orthonormal basis of `ker(phi)` from the right singular vectors whose
/// singular values fall at or below `rank_tol * sigma_max`.
pub fn kernel_basis<T: Scalar>(phi: &DenseMatrix<T>, rank_tol: T) -> Result<Subspace<T>, MatrixError> {
    if phi.is_empty() {
        return Err(MatrixError::InvalidArgument("kernel_basis of an empty matrix".into()));
    }
    let f = svd(phi);
    let rank = f.rank(rank_tol);
    let n = phi.cols();
    let cols: Vec<usize> = (rank..n).collect();
    let basis = f.v.select_columns(&cols);
    Subspace::new(basis, T::tol(1e-10))
}

/// `lambda(M)`: the least singular value above `rank_tol * sigma_max`.
pub fn smallest_positive_singular_value<T: Scalar>(m: &DenseMatrix<T>, rank_tol: T) -> Result<T, MatrixError> {
    let f = svd(m);
    let cutoff = f.threshold(rank_tol);
    f.singular_values.iter().copied().filter(|&s| s > cutoff && s > T::zero()).last().ok_or(MatrixError::NoPositiveSingularValue)
}

/// Matrix with orthonormal rows spanning the orthogonal complement of `v`.
///
/// With a seed row, that row (renormalized) comes first; the remaining rows
/// come from projecting the standard basis vectors `e_1, e_2, ...` in order.
pub fn orthonormal_complement_basis<T: Scalar>(v: &Subspace<T>, seed_row: Option<&[T]>) -> Result<DenseMatrix<T>, MatrixError> {
    let n = v.ambient_dim();
    let fixed = v.basis_vectors();
    let tol = T::tol(1e-8);
    let mut rows: Vec<Vec<T>> = Vec::new();
    if let Some(seed) = seed_row {
        if seed.len() != n {
            return Err(MatrixError::InvalidArgument(format!("seed row has length {}, ambient dimension is {n}", seed.len())));
        }
        let len = norm2(seed);
        if (len - T::one()).abs() > tol {
            return Err(MatrixError::InvalidArgument(format!("seed row has norm {len}, expected 1")));
        }
        let worst = fixed.iter().map(|b| dot(b, seed).abs()).fold(T::zero(), T::max);
        if worst > tol {
            return Err(MatrixError::InvalidArgument(format!("seed row is not orthogonal to the subspace: |<seed, basis>| = {worst:e}")));
        }
        rows.push(seed.iter().map(|&x| x / len).collect());
    }
    let mut anchored = fixed.clone();
    anchored.extend(rows.iter().cloned());
    let candidates: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut e = vec![T::zero(); n];
            e[i] = T::one();
            e
        })
        .collect();
    let extra = gram_schmidt(&anchored, &candidates, T::of(COMPLETION_DROP_TOL));
    rows.extend(extra);
    let want = n - v.dim();
    if rows.len() != want {
        return Err(MatrixError::Internal(format!("orthonormal completion produced {} rows, expected {want}", rows.len())));
    }
    if rows.is_empty() {
        return Ok(DenseMatrix::zeros(0, n));
    }
    DenseMatrix::from_rows(&rows)
}

/// `U * phi` for an invertible `U`.
pub fn row_transform<T: Scalar>(u: &DenseMatrix<T>, phi: &DenseMatrix<T>, rank_tol: T) -> Result<DenseMatrix<T>, MatrixError> {
    if u.rows() != u.cols() {
        return Err(MatrixError::InvalidArgument(format!("U must be square, got {:?}", u.shape())));
    }
    if u.cols() != phi.rows() {
        return Err(MatrixError::Incompatible(format!("U is {:?}, Phi is {:?}", u.shape(), phi.shape())));
    }
    if u.rows() > 0 {
        let f = svd(u);
        let smin = *f.singular_values.last().expect("nonempty");
        if smin <= rank_tol || f.rank(rank_tol) < u.rows() {
            return Err(MatrixError::InvalidArgument(format!("U is singular (smallest singular value {smin:e})")));
        }
    }
    Ok(u.matmul(phi))
}

/// Appends the unit row `(1, -1, 0, ..., 0)/sqrt(2)`, which is orthogonal to
/// the all-ones vector; used to reach an odd row count.
pub fn append_balanced_row<T: Scalar>(a: &mut DenseMatrix<T>) {
    let n = a.cols();
    assert!(n >= 2, "balanced row needs at least two columns");
    let mut row = vec![T::zero(); n];
    let h = T::one() / T::of(2.0).sqrt();
    row[0] = h;
    row[1] = -h;
    a.append_row(&row);
}
