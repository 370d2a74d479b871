//! Basis pursuit (`eps = 0`) and basis pursuit denoising (`eps > 0`).
//!
//! The noiseless problem is an exact LP in the split `x = u - w`. The noisy
//! problem runs Douglas-Rachford splitting between the l1 prox and the exact
//! Euclidean projection onto `{x : ||Phi x - y||_2 <= eps}`.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{nsp_l1_bound, rip_l2_bound, ripnsp_l2_bound, BoundReport, BoundsError};
use crate::certify::sigma_s;
use crate::io::matrix_hash;
use crate::linalg::{dot, norm1, norm2, norm_inf, sub, svd, DenseMatrix, Svd};
use crate::lp::{LinearProgram, LpError, LpOptions, LpSolution, Relation, Sense};
use crate::matrixlab::DEFAULT_RANK_TOL;
use crate::report::number;
use crate::scalar::Scalar;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SolverError {
    #[error("Phi is {rows}x{cols} but y has length {len}")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecoveryStatus {
    Optimal,
    MaxIterations,
    Infeasible,
}

impl RecoveryStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RecoveryStatus::Optimal => "optimal",
            RecoveryStatus::MaxIterations => "max-iterations",
            RecoveryStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BpOptions<T> {
    pub feas_tol: T,
    pub opt_tol: T,
    pub max_iter: usize,
    pub rank_tol: T,
}

impl<T: Scalar> Default for BpOptions<T> {
    fn default() -> Self {
        Self { feas_tol: T::tol(1e-9), opt_tol: T::tol(1e-8), max_iter: 200_000, rank_tol: T::tol(DEFAULT_RANK_TOL) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult<T> {
    pub xhat: Vec<T>,
    /// `||Phi xhat - y||_2`.
    pub residual_norm: T,
    pub l1_value: T,
    pub status: RecoveryStatus,
    pub iterations: usize,
    /// Upper bound on `||xhat||_1 - OPT` from a dual feasible point; `0` for LP optima.
    pub opt_gap_estimate: T,
}

impl<T: Scalar> RecoveryResult<T> {
    fn new(phi: &DenseMatrix<T>, y: &[T], xhat: Vec<T>, status: RecoveryStatus, iterations: usize, opt_gap_estimate: T) -> Self {
        let residual_norm = norm2(&sub(&phi.matvec(&xhat), y));
        let l1_value = norm1(&xhat);
        Self { xhat, residual_norm, l1_value, status, iterations, opt_gap_estimate }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "xhat": crate::report::numbers(&self.xhat),
            "residual_norm": number(self.residual_norm),
            "l1_value": number(self.l1_value),
            "status": self.status.as_str(),
            "iterations": self.iterations,
            "opt_gap_estimate": number(self.opt_gap_estimate),
        })
    }
}

/// Range geometry of `Phi` used for projections and least squares.
struct Range<T> {
    svd: Svd<T>,
    rank: usize,
    /// Coordinates of `y` along the left singular vectors.
    eta: Vec<T>,
    /// Squared norm of the component of `y` orthogonal to `range(Phi)`.
    outside_sq: T,
}

impl<T: Scalar> Range<T> {
    fn new(phi: &DenseMatrix<T>, y: &[T], rank_tol: T) -> Self {
        let svd = svd(phi);
        let rank = svd.rank(rank_tol);
        let eta: Vec<T> = (0..rank).map(|i| (0..phi.rows()).fold(T::zero(), |acc, r| acc + svd.u[(r, i)] * y[r])).collect();
        let mut outside = y.to_vec();
        for (i, &e) in eta.iter().enumerate() {
            for (r, o) in outside.iter_mut().enumerate() {
                *o -= e * svd.u[(r, i)];
            }
        }
        let outside_sq = outside.iter().fold(T::zero(), |acc, &v| acc + v * v);
        Self { svd, rank, eta, outside_sq }
    }

    fn coords(&self, x: &[T]) -> Vec<T> {
        (0..self.rank).map(|i| (0..x.len()).fold(T::zero(), |acc, k| acc + self.svd.v[(k, i)] * x[k])).collect()
    }

    fn shift(&self, x: &mut [T], delta: &[T]) {
        for (i, &d) in delta.iter().enumerate() {
            if d != T::zero() {
                for (k, xk) in x.iter_mut().enumerate() {
                    *xk += d * self.svd.v[(k, i)];
                }
            }
        }
    }

    /// Minimum-norm least-squares solution of `Phi x = y`.
    fn least_squares(&self, n: usize) -> Vec<T> {
        let mut x = vec![T::zero(); n];
        let coef: Vec<T> = (0..self.rank).map(|i| self.eta[i] / self.svd.singular_values[i]).collect();
        self.shift(&mut x, &coef);
        x
    }

    /// Euclidean projection onto `{x : ||Phi x - y|| <= eps}`; the set must be nonempty.
    fn project(&self, x: &[T], eps: T) -> Vec<T> {
        let xi = self.coords(x);
        let sv = &self.svd.singular_values;
        let r: Vec<T> = (0..self.rank).map(|i| sv[i] * xi[i] - self.eta[i]).collect();
        let eps_sq = eps * eps;
        let excess = |mu: T| {
            (0..self.rank).fold(T::zero(), |acc, i| {
                let t = r[i] / (T::one() + mu * sv[i] * sv[i]);
                acc + t * t
            }) + self.outside_sq
                - eps_sq
        };
        if excess(T::zero()) <= T::zero() {
            return x.to_vec();
        }
        let delta: Vec<T> = if self.outside_sq >= eps_sq {
            // the set is the affine solution set of the least-squares problem
            (0..self.rank).map(|i| self.eta[i] / sv[i] - xi[i]).collect()
        } else {
            let mut lo = T::zero();
            let mut hi = T::one() / (sv[0] * sv[0]);
            while excess(hi) > T::zero() && hi < T::max_value() / T::of(4.0) {
                lo = hi;
                hi *= T::of(4.0);
            }
            // bisection in the geometric mean keeps relative precision across scales
            for _ in 0..200 {
                let mid = if lo > T::zero() { (lo * hi).sqrt() } else { hi / T::of(2.0) };
                if mid <= lo || mid >= hi {
                    break;
                }
                if excess(mid) > T::zero() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mu = hi;
            (0..self.rank).map(|i| (xi[i] + mu * sv[i] * self.eta[i]) / (T::one() + mu * sv[i] * sv[i]) - xi[i]).collect()
        };
        let mut z = x.to_vec();
        self.shift(&mut z, &delta);
        z
    }

    /// `lambda` with `Phi^T lambda` the least-squares fit to `g`.
    fn dual_from_subgradient(&self, g: &[T], m: usize) -> Vec<T> {
        let c = self.coords(g);
        let mut lambda = vec![T::zero(); m];
        for (i, &ci) in c.iter().enumerate().take(self.rank) {
            let f = ci / self.svd.singular_values[i];
            for (r, l) in lambda.iter_mut().enumerate() {
                *l += f * self.svd.u[(r, i)];
            }
        }
        lambda
    }
}

fn soft_threshold<T: Scalar>(z: &[T], tau: T) -> Vec<T> {
    z.iter()
        .map(|&v| {
            let a = v.abs() - tau;
            if a > T::zero() {
                a.copysign(v)
            } else {
                T::zero()
            }
        })
        .collect()
}

fn validate<T: Scalar>(phi: &DenseMatrix<T>, y: &[T], eps: T) -> Result<(), SolverError> {
    if y.len() != phi.rows() {
        return Err(SolverError::Shape { rows: phi.rows(), cols: phi.cols(), len: y.len() });
    }
    if phi.is_empty() {
        return Err(SolverError::InvalidArgument("Phi has no entries".into()));
    }
    if !eps.is_finite() || eps < T::zero() {
        return Err(SolverError::InvalidArgument(format!("eps = {eps} must be finite and nonnegative")));
    }
    if y.iter().any(|v| !v.is_finite()) || phi.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(SolverError::InvalidArgument("non-finite data".into()));
    }
    Ok(())
}

/// Solves `min ||x||_1` subject to `||Phi x - y||_2 <= eps`.
pub fn basis_pursuit<T: Scalar>(phi: &DenseMatrix<T>, y: &[T], eps: T, opts: &BpOptions<T>) -> Result<RecoveryResult<T>, SolverError> {
    validate(phi, y, eps)?;
    let n = phi.cols();
    let range = Range::new(phi, y, opts.rank_tol);
    let scale = T::one().max(norm2(y));
    if range.outside_sq.sqrt() > eps + opts.feas_tol * scale {
        let x = range.least_squares(n);
        return Ok(RecoveryResult::new(phi, y, x, RecoveryStatus::Infeasible, 0, T::infinity()));
    }
    if eps == T::zero() {
        return noiseless(phi, y, &range, opts);
    }
    if norm2(y) <= eps {
        return Ok(RecoveryResult::new(phi, y, vec![T::zero(); n], RecoveryStatus::Optimal, 0, T::zero()));
    }
    Ok(douglas_rachford(phi, y, eps, &range, opts))
}

fn noiseless<T: Scalar>(phi: &DenseMatrix<T>, y: &[T], range: &Range<T>, opts: &BpOptions<T>) -> Result<RecoveryResult<T>, SolverError> {
    let n = phi.cols();
    let mut lp = LinearProgram::new(Sense::Minimize, vec![T::one(); 2 * n]);
    for (r, &yr) in y.iter().enumerate() {
        let row = phi.row(r);
        let coeffs: Vec<T> = row.iter().copied().chain(row.iter().map(|&a| -a)).collect();
        lp.constrain(coeffs, Relation::Eq, yr);
    }
    let lp_opts = LpOptions { feas_tol: T::tol(1e-7) };
    let x = match lp.solve(&lp_opts)? {
        LpSolution::Optimal { x, .. } => (0..n).map(|j| x[j] - x[n + j]).collect::<Vec<T>>(),
        LpSolution::Infeasible => {
            let x = range.least_squares(n);
            return Ok(RecoveryResult::new(phi, y, x, RecoveryStatus::Infeasible, 0, T::infinity()));
        }
        LpSolution::Unbounded => return Err(SolverError::Lp(LpError::Backend("l1 objective reported unbounded".into()))),
    };
    let x = polish(phi, y, x, opts);
    let result = RecoveryResult::new(phi, y, x, RecoveryStatus::Optimal, 1, T::zero());
    let scale = T::one().max(norm2(y));
    if result.residual_norm > opts.feas_tol * scale {
        return Ok(RecoveryResult { status: RecoveryStatus::Infeasible, opt_gap_estimate: T::infinity(), ..result });
    }
    Ok(result)
}

/// Re-solves the equations on the LP vertex's support so the residual drops
/// to rounding level; kept only if the l1 value does not grow beyond `opt_tol`.
fn polish<T: Scalar>(phi: &DenseMatrix<T>, y: &[T], x: Vec<T>, opts: &BpOptions<T>) -> Vec<T> {
    let cutoff = T::tol(1e-12) * T::one().max(norm_inf(&x));
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j].abs() > cutoff).collect();
    if support.is_empty() || support.len() > phi.rows() {
        return x;
    }
    let sub_phi = phi.select_columns(&support);
    let local = Range::new(&sub_phi, y, opts.rank_tol);
    if local.rank < support.len() {
        return x;
    }
    let xs = local.least_squares(support.len());
    let mut polished = vec![T::zero(); x.len()];
    for (&j, &v) in support.iter().zip(&xs) {
        polished[j] = v;
    }
    let before = norm2(&sub(&phi.matvec(&x), y));
    let after = norm2(&sub(&phi.matvec(&polished), y));
    if after <= before && norm1(&polished) <= norm1(&x) + opts.opt_tol {
        polished
    } else {
        x
    }
}

fn douglas_rachford<T: Scalar>(phi: &DenseMatrix<T>, y: &[T], eps: T, range: &Range<T>, opts: &BpOptions<T>) -> RecoveryResult<T> {
    let n = phi.cols();
    let m = phi.rows();
    let x_ls = range.least_squares(n);
    let tau = T::tol(1e-3).max(norm2(&x_ls) / T::of_usize(n).sqrt());
    let mut z = range.project(&x_ls, eps);
    let mut w_prev = z.clone();
    let mut x = z.clone();
    let mut best = z.clone();
    let mut best_l1 = norm1(&best);
    for k in 1..=opts.max_iter {
        x = soft_threshold(&z, tau);
        let reflected: Vec<T> = x.iter().zip(&z).map(|(&a, &b)| a + a - b).collect();
        let w = range.project(&reflected, eps);
        let mut gap = T::zero();
        let mut step = T::zero();
        for i in 0..n {
            let d = w[i] - x[i];
            z[i] += d;
            gap = gap.max(d.abs());
            step = step.max((w[i] - w_prev[i]).abs());
        }
        let l1 = norm1(&w);
        if l1 < best_l1 {
            best_l1 = l1;
            best.clone_from(&w);
        }
        w_prev = w;
        if step < opts.opt_tol && gap < opts.opt_tol {
            let gap_est = duality_gap(&w_prev, &z, &x, tau, y, eps, range, m);
            return RecoveryResult::new(phi, y, w_prev, RecoveryStatus::Optimal, k, gap_est);
        }
    }
    let gap_est = duality_gap(&best, &z, &x, tau, y, eps, range, m);
    RecoveryResult::new(phi, y, best, RecoveryStatus::MaxIterations, opts.max_iter, gap_est)
}

/// `||xhat||_1 - (lambda^T y - eps ||lambda||)` for a dual feasible `lambda`
/// built from the subgradient `(z - x) / tau` the iteration maintains.
#[allow(clippy::too_many_arguments)]
fn duality_gap<T: Scalar>(xhat: &[T], z: &[T], x: &[T], tau: T, y: &[T], eps: T, range: &Range<T>, m: usize) -> T {
    let g: Vec<T> = z.iter().zip(x).map(|(&a, &b)| (a - b) / tau).collect();
    let lambda = range.dual_from_subgradient(&g, m);
    let mut at_lambda = vec![T::zero(); g.len()];
    let c: Vec<T> = (0..range.rank)
        .map(|i| (0..m).fold(T::zero(), |acc, r| acc + range.svd.u[(r, i)] * lambda[r]) * range.svd.singular_values[i])
        .collect();
    range.shift(&mut at_lambda, &c);
    let inf = norm_inf(&at_lambda);
    if inf <= T::zero() {
        return norm1(xhat);
    }
    let scale = T::one().min(T::one() / inf);
    let dual = scale * (dot(&lambda, y) - eps * norm2(&lambda));
    (norm1(xhat) - dual).max(T::zero())
}

/// Certified constants that decide which stability bounds apply to an experiment.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundContext<T> {
    /// `delta_2s` of `Phi` itself.
    pub rip_delta_2s: Option<T>,
    /// NSP constant of `ker Phi` at order `s`.
    pub nsp_gamma: Option<T>,
    /// `delta_2s` of some matrix whose kernel equals `ker Phi`.
    pub kernel_rip_delta_2s: Option<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord<T> {
    pub matrix_hash: String,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub eps: T,
    pub error_l2: T,
    pub error_l1: T,
    pub sigma_s: T,
    pub bounds: Vec<BoundReport<T>>,
    pub result: RecoveryResult<T>,
}

impl<T: Scalar> ExperimentRecord<T> {
    pub fn bound(&self, name: &str) -> Option<T> {
        self.bounds.iter().find(|b| b.name == name).map(|b| b.value)
    }

    pub fn to_json(&self) -> Value {
        let bounds: BTreeMap<String, Value> = self.bounds.iter().map(|b| (b.name.to_string(), number(b.value))).collect();
        json!({
            "matrix_hash": self.matrix_hash,
            "N": self.n,
            "M": self.m,
            "s": self.s,
            "eps": number(self.eps),
            "error_l2": number(self.error_l2),
            "error_l1": number(self.error_l1),
            "sigma_s": number(self.sigma_s),
            "bounds": bounds,
            "status": self.result.status.as_str(),
            "iterations": self.result.iterations,
        })
    }
}

/// Recovers `x_true` from `Phi x_true + noise` and evaluates every bound the context enables.
pub fn recovery_experiment<T: Scalar>(
    phi: &DenseMatrix<T>,
    x_true: &[T],
    noise: &[T],
    eps: T,
    s: usize,
    ctx: &BoundContext<T>,
    opts: &BpOptions<T>,
) -> Result<ExperimentRecord<T>, SolverError> {
    let (m, n) = phi.shape();
    if x_true.len() != n || noise.len() != m {
        return Err(SolverError::InvalidArgument(format!("x_true has length {}, noise {}; Phi is {m}x{n}", x_true.len(), noise.len())));
    }
    if s == 0 || s > n {
        return Err(SolverError::InvalidArgument(format!("s = {s} must lie in 1..={n}")));
    }
    if norm2(noise) > eps * (T::one() + T::tol(1e-12)) {
        return Err(SolverError::InvalidArgument(format!("eps = {eps} is below the noise norm {}", norm2(noise))));
    }
    let y: Vec<T> = phi.matvec(x_true).iter().zip(noise).map(|(&a, &b)| a + b).collect();
    let result = basis_pursuit(phi, &y, eps, opts)?;
    let err = sub(&result.xhat, x_true);
    let sig = sigma_s(x_true, s);
    let mut bounds = Vec::new();
    if let Some(delta) = ctx.rip_delta_2s {
        bounds.push(rip_l2_bound(delta, eps, sig, s)?);
    }
    if ctx.nsp_gamma.is_some() || ctx.kernel_rip_delta_2s.is_some() {
        let lambda = crate::matrixlab::smallest_positive_singular_value(phi, opts.rank_tol)
            .map_err(|e| SolverError::InvalidArgument(e.to_string()))?;
        if let Some(gamma) = ctx.nsp_gamma {
            bounds.push(nsp_l1_bound(gamma, lambda, n, eps, sig)?);
        }
        if let Some(delta) = ctx.kernel_rip_delta_2s {
            bounds.push(ripnsp_l2_bound(delta, lambda, n, s, eps, sig)?);
        }
    }
    Ok(ExperimentRecord {
        matrix_hash: matrix_hash(phi),
        n,
        m,
        s,
        eps,
        error_l2: norm2(&err),
        error_l1: norm1(&err),
        sigma_s: sig,
        bounds,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(m: usize, n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = 1.0 / (m as f64).sqrt();
        DenseMatrix::new(m, n, (0..m * n).map(|_| rng.gen_range(-1.0..1.0) * scale * 3f64.sqrt()).collect()).unwrap()
    }

    fn sparse(n: usize, entries: &[(usize, f64)]) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for &(i, v) in entries {
            x[i] = v;
        }
        x
    }

    #[test]
    fn identity_noiseless_returns_y() {
        let y = vec![1.0, -2.0, 0.0, 3.5];
        let r = basis_pursuit(&DenseMatrix::<f64>::identity(4), &y, 0.0, &BpOptions::default()).unwrap();
        assert_eq!(r.status, RecoveryStatus::Optimal);
        for (a, b) in r.xhat.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn large_eps_gives_zero() {
        let phi = random_matrix(4, 8, 1);
        let y = vec![0.3, -0.1, 0.2, 0.0];
        let r = basis_pursuit(&phi, &y, norm2(&y), &BpOptions::default()).unwrap();
        assert!(r.xhat.iter().all(|&v| v == 0.0));
        assert_eq!(r.status, RecoveryStatus::Optimal);
    }

    #[test]
    fn noiseless_recovers_sparse_vector() {
        let phi = random_matrix(12, 24, 2);
        let x0 = sparse(24, &[(3, 1.5), (17, -0.7)]);
        let y = phi.matvec(&x0);
        let r = basis_pursuit(&phi, &y, 0.0, &BpOptions::default()).unwrap();
        assert_eq!(r.status, RecoveryStatus::Optimal);
        assert!(norm2(&sub(&r.xhat, &x0)) < 1e-9);
        assert!(r.residual_norm < 1e-12);
    }

    #[test]
    fn noiseless_infeasible() {
        let phi = DenseMatrix::<f64>::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let r = basis_pursuit(&phi, &[1.0, 0.0], 0.0, &BpOptions::default()).unwrap();
        assert_eq!(r.status, RecoveryStatus::Infeasible);
    }

    #[test]
    fn noisy_solution_is_feasible_and_near_optimal() {
        let phi = random_matrix(10, 20, 3);
        let x0 = sparse(20, &[(1, 1.0), (9, -2.0), (15, 0.5)]);
        let mut y = phi.matvec(&x0);
        y[0] += 0.01;
        let eps = 0.02;
        let r = basis_pursuit(&phi, &y, eps, &BpOptions::default()).unwrap();
        assert_eq!(r.status, RecoveryStatus::Optimal, "{r:?}");
        assert!(r.residual_norm <= eps + 1e-9);
        assert!(r.opt_gap_estimate < 1e-5, "{}", r.opt_gap_estimate);
        assert!(norm2(&sub(&r.xhat, &x0)) < 0.1);
    }

    #[test]
    fn projection_lands_on_the_ball() {
        let phi = random_matrix(5, 9, 4);
        let y = vec![1.0, 0.0, -1.0, 2.0, 0.5];
        let range = Range::new(&phi, &y, 1e-10);
        let x: Vec<f64> = (0..9).map(|i| i as f64 - 4.0).collect();
        let p = range.project(&x, 0.3);
        let res = norm2(&sub(&phi.matvec(&p), &y));
        assert!((res - 0.3).abs() < 1e-10, "{res}");
        // optimality: x - p is normal to the set, i.e. parallel to Phi^T (Phi p - y)
        let normal = phi.tr_matvec(&sub(&phi.matvec(&p), &y));
        let diff = sub(&x, &p);
        let cos = dot(&normal, &diff) / (norm2(&normal) * norm2(&diff));
        assert!((cos - 1.0).abs() < 1e-9, "{cos}");
    }

    #[test]
    fn shape_and_argument_errors() {
        let phi = random_matrix(3, 5, 5);
        assert!(matches!(basis_pursuit(&phi, &[1.0, 2.0], 0.0, &BpOptions::default()), Err(SolverError::Shape { .. })));
        assert!(basis_pursuit(&phi, &[1.0, 2.0, 3.0], -1.0, &BpOptions::default()).is_err());
    }

    #[test]
    fn experiment_record_contents() {
        let phi = random_matrix(10, 20, 6);
        let x0 = sparse(20, &[(4, 1.0), (11, -1.0)]);
        let noise = vec![0.0; 10];
        let ctx = BoundContext { rip_delta_2s: None, nsp_gamma: Some(0.5), kernel_rip_delta_2s: None };
        let rec = recovery_experiment(&phi, &x0, &noise, 0.0, 2, &ctx, &BpOptions::default()).unwrap();
        assert!(rec.error_l2 < 1e-9);
        assert_eq!(rec.sigma_s, 0.0);
        assert_eq!(rec.bound("nsp_l1"), Some(0.0));
        let v = rec.to_json();
        assert_eq!(v["N"], 20);
        assert_eq!(v["status"], "optimal");
        assert!(v["bounds"]["nsp_l1"].is_number());
        assert!(recovery_experiment(&phi, &x0, &[0.1; 10], 0.0, 2, &ctx, &BpOptions::default()).is_err());
    }
}
