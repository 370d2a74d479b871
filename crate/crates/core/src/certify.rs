//! Exact null space and restricted isometry constants by support enumeration.

use std::cmp::Ordering;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{norm1, norm2, svd, symmetric_eigen, DenseMatrix};
use crate::lp::{LinearProgram, LpError, LpOptions, LpSolution, Relation, Sense};
use crate::matrixlab::{Subspace, DEFAULT_RANK_TOL};
use crate::scalar::Scalar;

pub const DEFAULT_LP_TOL: f64 = 1e-9;
pub const DEFAULT_ENUMERATION_CAP: u64 = 2_000_000;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum CertifyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration of {required} subproblems exceeds the cap of {cap}")]
    ResourceLimit { required: u128, cap: u64 },
    #[error("LP solver failed on support {support:?}: {source}")]
    Solver { support: Vec<usize>, source: LpError },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug)]
pub struct NspOptions<T> {
    pub lp_tol: T,
    /// Relative singular-value threshold used to detect kernel vectors supported inside a support.
    pub rank_tol: T,
    /// Maximum number of LPs (supports times sign patterns) to solve.
    pub enumeration_cap: u64,
}

impl<T: Scalar> Default for NspOptions<T> {
    fn default() -> Self {
        Self { lp_tol: T::tol(DEFAULT_LP_TOL), rank_tol: T::tol(DEFAULT_RANK_TOL), enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }
}

/// Null space constant of order `s` with the extremal support and kernel vector.
///
/// `gamma` is `+inf` when some kernel vector lives entirely on a support of
/// size `s`. For finite `gamma` the witness is scaled so that
/// `||witness_{T^c}||_1 = 1`; otherwise it has unit 2-norm.
#[derive(Clone, Debug, PartialEq)]
pub struct NspCertificate<T> {
    pub order_s: usize,
    pub gamma: T,
    pub worst_support: Vec<usize>,
    pub witness: Vec<T>,
    pub lp_tol: T,
}

impl<T: Scalar> NspCertificate<T> {
    pub fn is_infinite(&self) -> bool {
        self.gamma.is_infinite()
    }

    pub fn satisfies(&self, gamma_target: T) -> bool {
        self.gamma <= gamma_target + self.lp_tol
    }
}

/// Value of the support subproblem `max ||v_T||_1 / ||v_{T^c}||_1` over the kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportValue<T> {
    pub gamma: T,
    pub witness: Vec<T>,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `||v_T||_1 / ||v_{T^c}||_1` with the conventions `0/0 = 0` and `x/0 = inf`.
pub fn l1_ratio<T: Scalar>(v: &[T], support: &[usize]) -> T {
    let mut inside = T::zero();
    let mut total = T::zero();
    for (i, x) in v.iter().enumerate() {
        total += x.abs();
        if support.contains(&i) {
            inside += x.abs();
        }
    }
    let outside = total - inside;
    if outside <= T::zero() {
        return if inside > T::zero() { T::infinity() } else { T::zero() };
    }
    inside / outside
}

fn nsp_args<T: Scalar>(kernel: &Subspace<T>, s: usize) -> Result<(), CertifyError> {
    let n = kernel.ambient_dim();
    if s == 0 || s >= n {
        return Err(CertifyError::InvalidArgument(format!("order s = {s} must satisfy 1 <= s <= N - 1 = {}", n.saturating_sub(1))));
    }
    Ok(())
}

/// Solves the support subproblem for one support `T` exactly.
///
/// One LP per sign pattern on `T` (the pattern and its negation give the
/// same value, so the first sign is fixed). Kernel coordinates are free
/// variables, and `p_j >= max(v_j, 0)` carries the absolute values on `T^c`.
pub fn nsp_support_value<T: Scalar>(
    kernel: &Subspace<T>,
    support: &[usize],
    opts: &NspOptions<T>,
) -> Result<SupportValue<T>, CertifyError> {
    let n = kernel.ambient_dim();
    let d = kernel.dim();
    if d == 0 {
        return Ok(SupportValue { gamma: T::zero(), witness: vec![T::zero(); n] });
    }
    let b = kernel.basis();
    let complement: Vec<usize> = (0..n).filter(|i| !support.contains(i)).collect();
    let h = b.select_rows(&complement);
    let g = b.select_rows(support);

    // a kernel vector vanishing on T^c makes the ratio unbounded
    let hs = svd(&h);
    let smax = T::one().max(hs.singular_values[0]);
    let smin = *hs.singular_values.last().expect("d >= 1");
    if smin <= opts.rank_tol * smax {
        let c = hs.v.column(d - 1);
        let v = b.matvec(&c);
        let nv = norm2(&v);
        return Ok(SupportValue { gamma: T::infinity(), witness: v.iter().map(|&x| x / nv).collect() });
    }

    // variables: kernel coordinates c (free), then p >= 0 on T^c
    let m = complement.len();
    let nvars = d + m;
    let col_sums: Vec<T> = (0..d).map(|k| (0..m).fold(T::zero(), |acc, j| acc + h[(j, k)])).collect();
    let mut template = LinearProgram::new(Sense::Maximize, vec![T::zero(); nvars]);
    for k in 0..d {
        template.set_free(k);
    }
    for j in 0..m {
        let mut row = vec![T::zero(); nvars];
        for k in 0..d {
            row[k] = h[(j, k)];
        }
        row[d + j] = -T::one();
        template.constrain(row, Relation::Le, T::zero());
    }
    // sum_j (2 p_j - (Hc)_j) >= ||Hc||_1 at any feasible point
    let mut norm_row = vec![T::zero(); nvars];
    for k in 0..d {
        norm_row[k] = -col_sums[k];
    }
    for j in 0..m {
        norm_row[d + j] = T::of(2.0);
    }
    template.constrain(norm_row, Relation::Le, T::one());

    let lp_opts = LpOptions::default();
    let s = support.len();
    let mut best: Option<SupportValue<T>> = None;
    for pattern in 0..(1usize << s.saturating_sub(1)) {
        let signs: Vec<T> = (0..s).map(|i| if i > 0 && (pattern >> (i - 1)) & 1 == 1 { -T::one() } else { T::one() }).collect();
        let obj: Vec<T> = (0..d).map(|k| (0..s).fold(T::zero(), |acc, i| acc + signs[i] * g[(i, k)])).collect();
        let mut lp = template.clone();
        lp.objective[..d].copy_from_slice(&obj);
        let sol = lp.solve(&lp_opts).map_err(|source| CertifyError::Solver { support: support.to_vec(), source })?;
        let candidate = match sol {
            LpSolution::Optimal { x, .. } => {
                let c = &x[..d];
                let v = b.matvec(c);
                let outside = complement.iter().fold(T::zero(), |acc, &j| acc + v[j].abs());
                let witness: Vec<T> = if outside > T::zero() { v.iter().map(|&x| x / outside).collect() } else { v };
                SupportValue { gamma: l1_ratio(&witness, support), witness }
            }
            LpSolution::Unbounded => {
                let c = hs.v.column(d - 1);
                let v = b.matvec(&c);
                let nv = norm2(&v);
                SupportValue { gamma: T::infinity(), witness: v.iter().map(|&x| x / nv).collect() }
            }
            LpSolution::Infeasible => {
                return Err(CertifyError::Internal(format!("support LP for {support:?} reported infeasible at the origin")));
            }
        };
        if best.as_ref().is_none_or(|b| candidate.gamma > b.gamma) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("at least one sign pattern"))
}

fn pick_max<T: Scalar, X>(a: (T, Vec<usize>, X), b: (T, Vec<usize>, X)) -> (T, Vec<usize>, X) {
    match a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Exact null space constant of order `s` of `kernel`.
///
/// Enumerates every support of size exactly `s`; smaller supports never give
/// a larger ratio. Ties go to the lexicographically smallest support.
pub fn nsp_constant<T: Scalar>(kernel: &Subspace<T>, s: usize, opts: &NspOptions<T>) -> Result<NspCertificate<T>, CertifyError> {
    nsp_args(kernel, s)?;
    let n = kernel.ambient_dim();
    if kernel.dim() == 0 {
        return Ok(NspCertificate {
            order_s: s,
            gamma: T::zero(),
            worst_support: (0..s).collect(),
            witness: vec![T::zero(); n],
            lp_tol: opts.lp_tol,
        });
    }
    let required = binomial(n, s).saturating_mul(1u128 << (s - 1).min(100));
    if required > opts.enumeration_cap as u128 {
        return Err(CertifyError::ResourceLimit { required, cap: opts.enumeration_cap });
    }
    let supports: Vec<Vec<usize>> = (0..n).combinations(s).collect();
    let best = supports
        .par_iter()
        .map(|t| nsp_support_value(kernel, t, opts).map(|sv| (sv.gamma, t.clone(), sv.witness)))
        .try_reduce_with(|a, b| Ok(pick_max(a, b)))
        .expect("at least one support")?;
    Ok(NspCertificate { order_s: s, gamma: best.0, worst_support: best.1, witness: best.2, lp_tol: opts.lp_tol })
}

/// Whether `kernel` has `(s, gamma_target)`-NSP, with the certificate that decides it.
pub fn has_nsp<T: Scalar>(
    kernel: &Subspace<T>,
    s: usize,
    gamma_target: T,
    opts: &NspOptions<T>,
) -> Result<(bool, NspCertificate<T>), CertifyError> {
    if !(gamma_target > T::zero() && gamma_target < T::one()) {
        return Err(CertifyError::InvalidArgument(format!("gamma target {gamma_target} must lie in (0, 1)")));
    }
    let cert = nsp_constant(kernel, s, opts)?;
    Ok((cert.satisfies(gamma_target), cert))
}

/// `sigma_s(x)`: l1 norm of `x` after removing its `s` largest-magnitude
/// entries (ties removed lowest index first).
pub fn sigma_s<T: Scalar>(x: &[T], s: usize) -> T {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].abs().partial_cmp(&x[i].abs()).unwrap_or(Ordering::Equal).then(i.cmp(&j)));
    idx.iter().skip(s).fold(T::zero(), |acc, &i| acc + x[i].abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RipSide {
    /// `lambda_max(G_T) - 1` attains the constant.
    Upper,
    /// `1 - lambda_min(G_T)` attains the constant.
    Lower,
}

impl RipSide {
    pub fn as_str(self) -> &'static str {
        match self {
            RipSide::Upper => "upper",
            RipSide::Lower => "lower",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RipCertificate<T> {
    pub order_k: usize,
    pub delta: T,
    pub worst_support: Vec<usize>,
    pub extremal_eigenvalue: T,
    pub side: RipSide,
    /// Unit eigenvector of the worst Gram submatrix, embedded in `R^N`.
    pub witness: Vec<T>,
    /// Set when only a random subset of supports was examined.
    pub lower_bound_only: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct Subsample {
    pub supports: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct RipOptions {
    pub enumeration_cap: u64,
    /// Examine random supports instead of all of them; the result is then only a lower bound.
    pub subsample: Option<Subsample>,
}

impl Default for RipOptions {
    fn default() -> Self {
        Self { enumeration_cap: DEFAULT_ENUMERATION_CAP, subsample: None }
    }
}

struct SupportRip<T> {
    delta: T,
    eigenvalue: T,
    side: RipSide,
    vector: Vec<T>,
}

fn support_rip<T: Scalar>(gram: &DenseMatrix<T>, support: &[usize]) -> SupportRip<T> {
    let k = support.len();
    let mut sub = DenseMatrix::zeros(k, k);
    for (a, &i) in support.iter().enumerate() {
        for (b, &j) in support.iter().enumerate() {
            sub[(a, b)] = gram[(i, j)];
        }
    }
    let (vals, vecs) = symmetric_eigen(&sub);
    let lo = vals[0];
    let hi = vals[k - 1];
    let upper = hi - T::one();
    let lower = T::one() - lo;
    if upper >= lower {
        SupportRip { delta: upper, eigenvalue: hi, side: RipSide::Upper, vector: vecs.column(k - 1) }
    } else {
        SupportRip { delta: lower, eigenvalue: lo, side: RipSide::Lower, vector: vecs.column(0) }
    }
}

/// Exact restricted isometry constant `delta_k` by enumerating all supports of size `k`.
pub fn rip_constant<T: Scalar>(phi: &DenseMatrix<T>, k: usize, opts: &RipOptions) -> Result<RipCertificate<T>, CertifyError> {
    let n = phi.cols();
    if k == 0 || k > n {
        return Err(CertifyError::InvalidArgument(format!("order k = {k} must satisfy 1 <= k <= N = {n}")));
    }
    let gram = phi.gram();
    let supports: Vec<Vec<usize>> = match opts.subsample {
        Some(sub) => {
            let mut rng = ChaCha8Rng::seed_from_u64(sub.seed);
            (0..sub.supports)
                .map(|_| {
                    let mut t = sample(&mut rng, n, k).into_vec();
                    t.sort_unstable();
                    t
                })
                .collect()
        }
        None => {
            let required = binomial(n, k);
            if required > opts.enumeration_cap as u128 {
                return Err(CertifyError::ResourceLimit { required, cap: opts.enumeration_cap });
            }
            (0..n).combinations(k).collect()
        }
    };
    if supports.is_empty() {
        return Err(CertifyError::InvalidArgument("no supports to examine".into()));
    }
    let (delta, worst_support, (eigenvalue, side, vector)) = supports
        .par_iter()
        .map(|t| {
            let r = support_rip(&gram, t);
            (r.delta, t.clone(), (r.eigenvalue, r.side, r.vector))
        })
        .reduce_with(pick_max)
        .expect("nonempty");
    let mut witness = vec![T::zero(); n];
    for (&i, &x) in worst_support.iter().zip(&vector) {
        witness[i] = x;
    }
    Ok(RipCertificate {
        order_k: k,
        delta: delta.max(T::zero()),
        worst_support,
        extremal_eigenvalue: eigenvalue,
        side,
        witness,
        lower_bound_only: opts.subsample.is_some(),
    })
}

/// NSP constant implied by `delta_2s`: `sqrt(2) delta / (1 - delta)`.
pub fn candes_nsp_from_rip<T: Scalar>(delta_2s: T) -> Result<T, CertifyError> {
    if !(delta_2s > T::zero() && delta_2s < T::one()) {
        return Err(CertifyError::InvalidArgument(format!("delta_2s = {delta_2s} must lie in (0, 1)")));
    }
    Ok(T::of(2.0).sqrt() * delta_2s / (T::one() - delta_2s))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpNormCheck<T> {
    pub holds: bool,
    pub op_norm: T,
    pub bound: T,
}

/// Checks `||Phi||_op <= sqrt(N/k + 1) sqrt(1 + delta_k)` (plus `1e-9` slack).
pub fn opnorm_bound_check<T: Scalar>(phi: &DenseMatrix<T>, k: usize, delta_k: T) -> OpNormCheck<T> {
    let n = T::of_usize(phi.cols());
    let bound = (n / T::of_usize(k) + T::one()).sqrt() * (T::one() + delta_k).sqrt();
    let op_norm = phi.op_norm();
    OpNormCheck { holds: op_norm <= bound + T::tol(1e-9), op_norm, bound }
}

/// `||v||_1`, re-exported for certificate checks.
pub fn l1<T: Scalar>(v: &[T]) -> T {
    norm1(v)
}
