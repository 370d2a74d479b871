//! A matrix with the null space property whose kernel no well-conditioned RIP
//! matrix shares, together with the recovery instance that exposes it.
//!
//! Build: an inner matrix `A` on the last `N - s` coordinates with the
//! all-ones vector in its kernel and a certified `(s, gamma/3)` NSP constant;
//! the kernel `N = {(0, h) : h in ker A, h _|_ 1} + span(d)`; and `Phi` with
//! orthonormal rows spanning the complement of that kernel, first row `phi1`.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{cai_zhang_constants, gap_threshold, ripnsp_l2_bound, BoundsError};
use crate::certify::{has_nsp, nsp_constant, CertifyError, NspCertificate, NspOptions};
use crate::io::{write_matrix_csv, write_vector_csv, IoError};
use crate::linalg::{dot, gram_schmidt, norm1, norm2, sub, DenseMatrix, MatrixError};
use crate::matrixlab::{
    append_balanced_row, kernel_basis, orthonormal_complement_basis, partial_dft, realify, sample_conjugate_free_rows,
    smallest_positive_singular_value, Subspace, DEFAULT_RANK_TOL,
};
use crate::report::{number, numbers};
use crate::scalar::Scalar;

#[derive(Error, Debug)]
pub enum GapError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no certified inner matrix after {attempts} attempts; best gamma {best_gamma} at seed {best_seed}")]
    ConstructionFailure { attempts: usize, best_gamma: f64, best_seed: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Io(#[from] IoError),
}

/// One measured identity with its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, tolerance: f64) -> Self {
        Self { name, measured, tolerance, passed: measured <= tolerance }
    }

    fn to_json(&self) -> Value {
        json!({ "name": self.name, "measured": number(self.measured), "tolerance": self.tolerance, "passed": self.passed })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Checks(pub Vec<Check>);

impl Checks {
    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.0.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(Check::to_json).collect())
    }

    fn into_result(self, what: &str) -> Result<Self, GapError> {
        if let Some(bad) = self.failures().first() {
            return Err(GapError::Internal(format!("{what}: {} measured {:e} exceeds {:e}", bad.name, bad.measured, bad.tolerance)));
        }
        Ok(self)
    }
}

fn pow2<T: Scalar>(k: usize) -> T {
    T::of(2.0).powi(k as i32)
}

/// `alpha = 2 (N - s) / ((N - 4s)(1 - 2^-s))`.
pub fn alpha_of<T: Scalar>(n: usize, s: usize) -> T {
    let num = T::of(2.0) * T::of_usize(n - s);
    num / (T::of_usize(n - 4 * s) * (T::one() - T::one() / pow2::<T>(s)))
}

/// `d = ((N-4s) gamma / 2^2, ..., (N-4s) gamma / 2^(s+1), -1, ..., -1)`.
pub fn d_vector<T: Scalar>(n: usize, s: usize, gamma: T) -> Vec<T> {
    let head = T::of_usize(n - 4 * s) * gamma;
    (0..n).map(|i| if i < s { head / pow2::<T>(i + 2) } else { -T::one() }).collect()
}

fn check_shape(n: usize, s: usize) -> Result<(), GapError> {
    if s == 0 || n <= 4 * s {
        return Err(GapError::InvalidArgument(format!("need s >= 1 and N > 4s, got N = {n}, s = {s}")));
    }
    Ok(())
}

fn check_gamma<T: Scalar>(gamma: T) -> Result<(), GapError> {
    if !(gamma > T::zero() && gamma < T::one()) {
        return Err(GapError::InvalidArgument(format!("gamma = {gamma} must lie in (0, 1)")));
    }
    Ok(())
}

/// Realified partial DFT on `cols` points with `rows` rows and the all-ones
/// vector in its kernel; an odd row count gets the balanced row appended.
pub fn inner_candidate<T: Scalar>(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix<T>, GapError> {
    if rows == 0 || cols < rows + 1 {
        return Err(GapError::InvalidArgument(format!("inner matrix needs 1 <= rows < cols, got {rows}x{cols}")));
    }
    let freqs = sample_conjugate_free_rows(cols, rows / 2, seed)?;
    let mut a = if freqs.is_empty() { DenseMatrix::zeros(0, cols) } else { realify(&partial_dft::<T>(cols, &freqs)?) };
    if rows % 2 == 1 {
        append_balanced_row(&mut a);
    }
    Ok(a)
}

#[derive(Clone, Debug)]
pub struct InnerMatrix<T> {
    pub a: DenseMatrix<T>,
    pub certificate: NspCertificate<T>,
    pub seed: u64,
    pub attempts: usize,
}

/// Searches seeds `seed, seed + 1, ...` for an inner matrix certified to have
/// `(s, gamma_over_3)`-NSP; the first success is returned.
pub fn build_inner_matrix<T: Scalar>(
    rows: usize,
    cols: usize,
    s: usize,
    gamma_over_3: T,
    seed: u64,
    max_attempts: usize,
    opts: &NspOptions<T>,
) -> Result<InnerMatrix<T>, GapError> {
    if s == 0 || s >= cols {
        return Err(GapError::InvalidArgument(format!("s = {s} must lie in 1..{cols}")));
    }
    if max_attempts == 0 {
        return Err(GapError::InvalidArgument("max_attempts must be positive".into()));
    }
    let mut best = (T::infinity(), seed);
    for attempt in 0..max_attempts {
        let candidate_seed = seed.wrapping_add(attempt as u64);
        let a = inner_candidate::<T>(rows, cols, candidate_seed)?;
        let kernel = kernel_basis(&a, T::tol(DEFAULT_RANK_TOL))?;
        let (ok, certificate) = has_nsp(&kernel, s, gamma_over_3, opts)?;
        if ok {
            return Ok(InnerMatrix { a, certificate, seed: candidate_seed, attempts: attempt + 1 });
        }
        if certificate.gamma < best.0 {
            best = (certificate.gamma, candidate_seed);
        }
    }
    Err(GapError::ConstructionFailure { attempts: max_attempts, best_gamma: best.0.as_f64(), best_seed: best.1 })
}

#[derive(Clone, Debug)]
pub struct GapConstruction<T> {
    pub n: usize,
    pub s: usize,
    pub gamma: T,
    /// `(M - s) x (N - s)`, all-ones vector in its kernel.
    pub a: DenseMatrix<T>,
    pub d: Vec<T>,
    pub phi1: Vec<T>,
    pub alpha: T,
    pub rho: T,
    /// The kernel of `phi`.
    pub kernel: Subspace<T>,
    /// Orthonormal rows, first row `phi1`.
    pub phi: DenseMatrix<T>,
    /// `{(0, h) : h in ker A, h _|_ 1}`.
    pub padded_inner: Subspace<T>,
    /// Seed of the inner matrix, when it came from the seed search.
    pub seed: Option<u64>,
}

pub fn build_gap_matrix<T: Scalar>(
    n: usize,
    s: usize,
    gamma: T,
    a: DenseMatrix<T>,
    seed: Option<u64>,
) -> Result<GapConstruction<T>, GapError> {
    check_shape(n, s)?;
    check_gamma(gamma)?;
    let tail = n - s;
    if a.cols() != tail {
        return Err(GapError::InvalidArgument(format!("A has {} columns, expected N - s = {tail}", a.cols())));
    }
    let ones = vec![T::one(); tail];
    let a_ones = if a.rows() == 0 { T::zero() } else { norm2(&a.matvec(&ones)) };
    if a_ones > T::tol(1e-10) * T::one().max(a.frobenius_norm()) {
        return Err(GapError::InvalidArgument(format!("all-ones vector is not in ker A: ||A 1|| = {a_ones:e}")));
    }

    let ker_a = if a.rows() == 0 {
        Subspace::new(DenseMatrix::identity(tail), T::tol(1e-10))?
    } else {
        kernel_basis(&a, T::tol(DEFAULT_RANK_TOL))?
    };
    let unit_ones: Vec<T> = ones.iter().map(|&x| x / T::of_usize(tail).sqrt()).collect();
    let inner_e = gram_schmidt(&[unit_ones], &ker_a.basis_vectors(), T::tol(1e-8));
    if inner_e.len() + 1 != ker_a.dim() {
        return Err(GapError::Internal(format!("ker A has dimension {} but its part orthogonal to 1 has {}", ker_a.dim(), inner_e.len())));
    }
    let padded_inner = if inner_e.is_empty() {
        Subspace::zero(n)
    } else {
        Subspace::new(DenseMatrix::from_columns(tail, &inner_e)?, T::tol(1e-10))?.pad_leading(s)
    };

    let d = d_vector(n, s, gamma);
    let worst_hd = padded_inner.basis_vectors().iter().map(|h| dot(h, &d).abs()).fold(T::zero(), T::max);
    if worst_hd > T::tol(1e-10) * norm2(&d) {
        return Err(GapError::Internal(format!("d is not orthogonal to the padded inner kernel: {worst_hd:e}")));
    }
    let dn = norm2(&d);
    let mut columns = padded_inner.basis_vectors();
    columns.push(d.iter().map(|&x| x / dn).collect());
    let kernel = Subspace::new(DenseMatrix::from_columns(n, &columns)?, T::tol(1e-10))?;

    let alpha = alpha_of::<T>(n, s);
    let rho = (T::of_usize(s) * alpha * alpha + T::of_usize(tail) * gamma * gamma).sqrt();
    let phi1: Vec<T> = (0..n).map(|i| if i < s { alpha / rho } else { gamma / rho }).collect();
    let worst = kernel.basis_vectors().iter().map(|v| dot(v, &phi1).abs()).fold(T::zero(), T::max);
    if worst > T::tol(1e-8) {
        return Err(GapError::Internal(format!("phi1 is not orthogonal to the kernel: {worst:e}")));
    }
    let phi = orthonormal_complement_basis(&kernel, Some(&phi1))?;
    let gc = GapConstruction { n, s, gamma, a, d, phi1, alpha, rho, kernel, phi, padded_inner, seed };
    gc.check_invariants().into_result("gap construction")?;
    Ok(gc)
}

impl<T: Scalar> GapConstruction<T> {
    pub fn m(&self) -> usize {
        self.phi.rows()
    }

    /// Measures every structural identity of the construction.
    pub fn check_invariants(&self) -> Checks {
        let (n, s) = (self.n, self.s);
        let f = |x: T| x.as_f64();
        let mut checks = Vec::new();

        let d_exact = d_vector(n, s, self.gamma);
        let d_err = self.d.iter().zip(&d_exact).map(|(&a, &b)| f((a - b).abs())).fold(0.0, f64::max);
        checks.push(Check::at_most("d_closed_form", d_err, 0.0));
        checks.push(Check::at_most("alpha_closed_form", f((self.alpha - alpha_of::<T>(n, s)).abs()), 0.0));
        let phi1_exact: Vec<T> = (0..n).map(|i| if i < s { self.alpha } else { self.gamma } / self.rho).collect();
        let phi1_err = self.phi1.iter().zip(&phi1_exact).map(|(&a, &b)| f((a - b).abs())).fold(0.0, f64::max);
        checks.push(Check::at_most("phi1_closed_form", phi1_err, T::epsilon().as_f64() * 8.0));
        checks.push(Check::at_most("phi1_unit_norm", f((norm2(&self.phi1) - T::one()).abs()), T::tol(1e-12).as_f64()));
        let phi1_kernel = self.kernel.basis_vectors().iter().map(|v| f(dot(v, &self.phi1).abs())).fold(0.0, f64::max);
        checks.push(Check::at_most("phi1_orthogonal_to_kernel", phi1_kernel, T::tol(1e-10).as_f64()));
        let ip = (self.alpha * self.d[..s].iter().fold(T::zero(), |acc, &x| acc + x) - self.gamma * T::of_usize(n - s)) / self.rho;
        checks.push(Check::at_most("phi1_orthogonal_to_d", f(ip.abs()), T::tol(1e-10).as_f64()));

        let gram = self.phi.matmul(&self.phi.transpose());
        checks.push(Check::at_most(
            "phi_rows_orthonormal",
            f(gram.max_abs_diff(&DenseMatrix::identity(self.phi.rows()))),
            T::tol(1e-10).as_f64(),
        ));
        let first_row = self.phi.row(0).iter().zip(&self.phi1).map(|(&a, &b)| f((a - b).abs())).fold(0.0, f64::max);
        checks.push(Check::at_most("phi_first_row_is_phi1", first_row, T::tol(1e-12).as_f64()));
        checks.push(Check::at_most("phi_shape", (self.phi.rows() + self.kernel.dim()).abs_diff(n) as f64, 0.0));
        let kernel_err = match kernel_basis(&self.phi, T::tol(DEFAULT_RANK_TOL)) {
            Ok(k) if k.dim() == self.kernel.dim() => f(k.projector_distance(&self.kernel)),
            _ => f64::INFINITY,
        };
        checks.push(Check::at_most("kernel_of_phi_matches", kernel_err, T::tol(1e-8).as_f64()));
        let ones = vec![T::one(); n - s];
        let a_ones = if self.a.rows() == 0 { 0.0 } else { f(norm2(&self.a.matvec(&ones))) };
        checks.push(Check::at_most("ones_in_kernel_of_a", a_ones, T::tol(1e-10).as_f64()));
        Checks(checks)
    }

    /// Writes `A.csv`, `Phi.csv`, `d.csv`, `phi1.csv`, and `params.json` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<(), GapError> {
        fs::create_dir_all(dir).map_err(|source| IoError::Io { path: dir.to_path_buf(), source })?;
        write_matrix_csv(&dir.join("A.csv"), &self.a)?;
        write_matrix_csv(&dir.join("Phi.csv"), &self.phi)?;
        write_vector_csv(&dir.join("d.csv"), &self.d)?;
        write_vector_csv(&dir.join("phi1.csv"), &self.phi1)?;
        let params = serde_json::to_string_pretty(&self.params_json()).expect("JSON values always serialize");
        let path = dir.join("params.json");
        fs::write(&path, params + "\n").map_err(|source| IoError::Io { path, source })?;
        Ok(())
    }

    pub fn params_json(&self) -> Value {
        json!({
            "N": self.n,
            "s": self.s,
            "M": self.m(),
            "gamma": number(self.gamma),
            "alpha": number(self.alpha),
            "rho": number(self.rho),
            "seed": self.seed,
        })
    }
}

#[derive(Clone, Debug)]
pub struct KernelNspReport<T> {
    /// Whether the certified NSP constant of `ker Phi` is at most `gamma + lp_tol`.
    pub holds: bool,
    pub certificate: NspCertificate<T>,
    /// `||d_I||_1` and its closed form `(N - 4s)(1 - 2^-s) gamma / 2`.
    pub d_head_l1: T,
    pub d_head_l1_formula: T,
    /// Smallest `(gamma/2) ||d_{I^c} + h_{I^c}||_1 - ||d_I||_1` over the sampled `h`.
    pub observation1_margin: T,
    /// Largest `||A b_{I^c}||_2` over sampled kernel vectors `b = h + c d`.
    pub observation2_residual: T,
    pub checks: Checks,
}

impl<T: Scalar> KernelNspReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "certificate": crate::report::nsp_certificate_json(&self.certificate),
            "d_head_l1": number(self.d_head_l1),
            "d_head_l1_formula": number(self.d_head_l1_formula),
            "observation1_margin": number(self.observation1_margin),
            "observation2_residual": number(self.observation2_residual),
            "checks": self.checks.to_json(),
        })
    }
}

const OBSERVATION_SAMPLES: usize = 100;
const OBSERVATION_SEED: u64 = 0x5eed;

/// Certifies that `Phi` has `(s, gamma)`-NSP and checks the two structural
/// observations the argument rests on, on sampled kernel vectors.
pub fn verify_step2_nsp<T: Scalar>(gc: &GapConstruction<T>, opts: &NspOptions<T>) -> Result<KernelNspReport<T>, GapError> {
    let (n, s) = (gc.n, gc.s);
    let d_head_l1 = norm1(&gc.d[..s]);
    let d_head_l1_formula = T::of_usize(n - 4 * s) * (T::one() - T::one() / pow2::<T>(s)) * gc.gamma / T::of(2.0);

    let mut rng = ChaCha8Rng::seed_from_u64(OBSERVATION_SEED);
    let basis = gc.padded_inner.basis_vectors();
    let sample_h = |rng: &mut ChaCha8Rng| -> Vec<T> {
        let scale = T::of(10f64.powf(rng.gen_range(-2.0..2.0)));
        let mut h = vec![T::zero(); n];
        for b in &basis {
            let c = T::of(rng.gen_range(-1.0..1.0)) * scale;
            for (hi, &bi) in h.iter_mut().zip(b) {
                *hi += c * bi;
            }
        }
        h
    };
    let mut margin = T::infinity();
    let mut residual = T::zero();
    for _ in 0..OBSERVATION_SAMPLES {
        let h = sample_h(&mut rng);
        let tail: Vec<T> = (s..n).map(|i| gc.d[i] + h[i]).collect();
        margin = margin.min(gc.gamma / T::of(2.0) * norm1(&tail) - d_head_l1);
        let c = T::of(rng.gen_range(-3.0..3.0));
        let b: Vec<T> = (s..n).map(|i| h[i] + c * gc.d[i]).collect();
        if gc.a.rows() > 0 {
            residual = residual.max(norm2(&gc.a.matvec(&b)) / T::one().max(norm2(&b)));
        }
    }

    let certificate = nsp_constant(&gc.kernel, s, opts)?;
    let holds = certificate.satisfies(gc.gamma);
    let checks = Checks(vec![
        Check::at_most(
            "d_head_l1_formula",
            (d_head_l1 - d_head_l1_formula).abs().as_f64(),
            T::tol(1e-12).as_f64() * d_head_l1_formula.as_f64().max(1.0),
        ),
        Check { name: "observation1_strict", measured: margin.as_f64(), tolerance: 0.0, passed: margin > T::zero() },
        Check::at_most("observation2_tail_in_ker_a", residual.as_f64(), T::tol(1e-9).as_f64()),
    ]);
    Ok(KernelNspReport {
        holds,
        certificate,
        d_head_l1,
        d_head_l1_formula,
        observation1_margin: margin,
        observation2_residual: residual,
        checks,
    })
}

#[derive(Clone, Debug)]
pub struct AdversarialInstance<T> {
    pub x0: Vec<T>,
    /// `(rho, 0, ..., 0)` in `R^M`.
    pub z: Vec<T>,
    /// `Phi x0 - z`.
    pub y: Vec<T>,
    pub eps: T,
    /// `x0 - rho phi1 - gamma d`, equal to `(-alpha, ..., -alpha, 0, ..., 0)`.
    pub xhat: Vec<T>,
    /// `||xhat - x0||_2^2`.
    pub lower_bound: T,
    /// `N (N gamma^2 + (alpha^2 - gamma^2) s) / s`: an RIP-NSP constant `delta`
    /// would force `||xhat - x0||_2^2 <= C(delta) * upper_bound`.
    pub upper_bound: T,
    pub checks: Checks,
}

impl<T: Scalar> AdversarialInstance<T> {
    pub fn upper_bound_at(&self, delta_2s: T) -> Result<T, GapError> {
        let (d1, _) = cai_zhang_constants(delta_2s)?;
        Ok(d1 * d1 * (T::one() + delta_2s) * self.upper_bound)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x0": numbers(&self.x0),
            "z": numbers(&self.z),
            "y": numbers(&self.y),
            "eps": number(self.eps),
            "xhat": numbers(&self.xhat),
            "lower_bound": number(self.lower_bound),
            "upper_bound": number(self.upper_bound),
            "checks": self.checks.to_json(),
        })
    }

    /// Writes `instance.json`, `x0.csv`, `xhat.csv`, and `y.csv` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<(), GapError> {
        fs::create_dir_all(dir).map_err(|source| IoError::Io { path: dir.to_path_buf(), source })?;
        write_vector_csv(&dir.join("x0.csv"), &self.x0)?;
        write_vector_csv(&dir.join("xhat.csv"), &self.xhat)?;
        write_vector_csv(&dir.join("y.csv"), &self.y)?;
        let path = dir.join("instance.json");
        let text = serde_json::to_string_pretty(&self.to_json()).expect("JSON values always serialize");
        fs::write(&path, text + "\n").map_err(|source| IoError::Io { path, source })?;
        Ok(())
    }
}

pub fn adversarial_instance<T: Scalar>(gc: &GapConstruction<T>) -> Result<AdversarialInstance<T>, GapError> {
    gc.check_invariants().into_result("gap construction")?;
    let (n, s) = (gc.n, gc.s);
    let gamma = gc.gamma;
    let x0: Vec<T> = (0..n).map(|i| if i < s { gamma * gc.d[i] } else { T::zero() }).collect();
    let mut z = vec![T::zero(); gc.m()];
    z[0] = gc.rho;
    let y = sub(&gc.phi.matvec(&x0), &z);
    let eps = gc.rho;
    let xhat: Vec<T> = (0..n).map(|i| x0[i] - gc.rho * gc.phi1[i] - gamma * gc.d[i]).collect();

    let f = |x: T| x.as_f64();
    let scale = |x: T| T::one().max(x.abs());
    let mut checks = Vec::new();
    let closed = (0..n).map(|i| f((xhat[i] - if i < s { -gc.alpha } else { T::zero() }).abs())).fold(0.0, f64::max);
    checks.push(Check::at_most("xhat_closed_form", closed, T::tol(1e-10).as_f64()));
    checks.push(Check::at_most("xhat_feasible", f(norm2(&sub(&gc.phi.matvec(&xhat), &y))), T::tol(1e-9).as_f64()));
    let xhat_l1 = gc.alpha * T::of_usize(s);
    checks.push(Check::at_most("xhat_l1_is_alpha_s", f((norm1(&xhat) - xhat_l1).abs()), T::tol(1e-10).as_f64() * f(scale(xhat_l1))));
    let x0_l1 = T::of(0.5) * T::of_usize(n - 4 * s) * (T::one() - T::one() / pow2::<T>(s)) * gamma * gamma;
    checks.push(Check::at_most("x0_l1_closed_form", f((norm1(&x0) - x0_l1).abs()), T::tol(1e-10).as_f64() * f(scale(x0_l1))));

    let diff = sub(&xhat, &x0);
    let lower_bound = dot(&diff, &diff);
    let by_formula = (0..s).fold(T::zero(), |acc, i| {
        let t = gc.alpha + T::of_usize(n - 4 * s) * gamma * gamma / pow2::<T>(i + 2);
        acc + t * t
    });
    checks.push(Check::at_most("lower_bound_two_ways", f((lower_bound - by_formula).abs()), T::tol(1e-9).as_f64() * f(scale(by_formula))));
    let q = T::of_usize(n - 4 * s);
    let floor = q * q * gamma.powi(4) / T::of(16.0);
    checks.push(Check { name: "lower_bound_inequality", measured: f(lower_bound - floor), tolerance: 0.0, passed: lower_bound >= floor });
    let checks = Checks(checks).into_result("adversarial instance")?;

    let nf = T::of_usize(n);
    let sf = T::of_usize(s);
    let upper_bound = nf * (nf * gamma * gamma + (gc.alpha * gc.alpha - gamma * gamma) * sf) / sf;
    Ok(AdversarialInstance { x0, z, y, eps, xhat, lower_bound, upper_bound, checks })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L1Comparison<T> {
    /// `(N - 4s)^2 (1 - 2^-s)^2 gamma^2 > 4 (N - s) s`.
    pub sufficient: bool,
    /// `alpha s <= (N - 4s)(1 - 2^-s) gamma^2 / 2`, i.e. `||xhat||_1 <= ||x0||_1`.
    pub direct: bool,
    pub xhat_l1: T,
    pub x0_l1: T,
    pub alpha: T,
}

pub fn l1_comparison<T: Scalar>(n: usize, s: usize, gamma: T) -> Result<L1Comparison<T>, GapError> {
    check_shape(n, s)?;
    check_gamma(gamma)?;
    let q = T::of_usize(n - 4 * s);
    let h = T::one() - T::one() / pow2::<T>(s);
    let alpha = alpha_of::<T>(n, s);
    let xhat_l1 = alpha * T::of_usize(s);
    let x0_l1 = T::of(0.5) * q * h * gamma * gamma;
    let sufficient = q * q * h * h * gamma * gamma > T::of(4.0) * T::of_usize(n - s) * T::of_usize(s);
    Ok(L1Comparison { sufficient, direct: xhat_l1 <= x0_l1, xhat_l1, x0_l1, alpha })
}

pub fn l1_comparison_holds<T: Scalar>(n: usize, s: usize, gamma: T) -> Result<bool, GapError> {
    Ok(l1_comparison(n, s, gamma)?.direct)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContradictionReport<T> {
    pub n: usize,
    pub s: usize,
    pub gamma: T,
    pub delta_2s: T,
    /// `(N - 4s)^2 gamma^4 / 16`.
    pub lower: T,
    /// `2 C gamma^2 N^2 / s`.
    pub upper: T,
    pub c: T,
    pub s_min: T,
    pub contradiction: bool,
    /// `s > 80 C / gamma^2`.
    pub threshold_satisfied: bool,
    /// `N >= 11 s / gamma^2`, the condition the argument uses.
    pub n_condition: bool,
    /// `s >= 5`.
    pub s_condition: bool,
    /// `N / s >= 11`, a weaker ratio condition.
    pub ratio_condition: bool,
}

impl<T: Scalar> ContradictionReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "s": self.s,
            "gamma": number(self.gamma),
            "delta_2s": number(self.delta_2s),
            "lower": number(self.lower),
            "upper": number(self.upper),
            "C": number(self.c),
            "s_min": number(self.s_min),
            "contradiction": self.contradiction,
            "threshold_satisfied": self.threshold_satisfied,
            "validity": {
                "N_ge_11s_over_gamma2": self.n_condition,
                "s_ge_5": self.s_condition,
                "N_over_s_ge_11": self.ratio_condition,
            },
            "note": "validity uses N >= 11 s / gamma^2; the weaker N / s >= 11 is reported separately",
        })
    }
}

/// Formula-scale comparison of the two bounds on `||xhat - x0||_2^2`.
pub fn contradiction_check<T: Scalar>(n: usize, s: usize, gamma: T, delta_2s: T) -> Result<ContradictionReport<T>, GapError> {
    if s == 0 || n == 0 {
        return Err(GapError::InvalidArgument(format!("N = {n} and s = {s} must be positive")));
    }
    let th = gap_threshold(delta_2s, gamma)?;
    let nf = T::of_usize(n);
    let sf = T::of_usize(s);
    let q = nf - T::of(4.0) * sf;
    let lower = q * q * gamma.powi(4) / T::of(16.0);
    let upper = T::of(2.0) * th.c * gamma * gamma * nf * nf / sf;
    Ok(ContradictionReport {
        n,
        s,
        gamma,
        delta_2s,
        lower,
        upper,
        c: th.c,
        s_min: th.s_min,
        contradiction: lower > upper,
        threshold_satisfied: sf > th.s_min,
        n_condition: nf >= T::of(11.0) * sf / (gamma * gamma),
        s_condition: s >= 5,
        ratio_condition: n >= 11 * s,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DisproofReport<T> {
    pub lambda_phi: T,
    pub delta_2s: T,
    /// Stability bound an RIP-NSP constant `delta_2s` would impose.
    pub bound: T,
    /// `||xhat - x0||_2`.
    pub actual: T,
    /// `actual > bound`: `Phi` is not RIP-NSP with this constant.
    pub disproven: bool,
}

impl<T: Scalar> DisproofReport<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda_phi": number(self.lambda_phi),
            "delta_2s": number(self.delta_2s),
            "bound": number(self.bound),
            "actual": number(self.actual),
            "disproven": self.disproven,
        })
    }
}

/// Matrix-scale test of the RIP-NSP stability bound on an adversarial instance.
pub fn ripnsp_disprove<T: Scalar>(
    phi: &DenseMatrix<T>,
    inst: &AdversarialInstance<T>,
    delta_2s: T,
    s: usize,
) -> Result<DisproofReport<T>, GapError> {
    let n = phi.cols();
    if inst.x0.len() != n || inst.xhat.len() != n {
        return Err(GapError::InvalidArgument("instance and matrix dimensions differ".into()));
    }
    let (xhat_l1, x0_l1) = (norm1(&inst.xhat), norm1(&inst.x0));
    if xhat_l1 > x0_l1 + T::tol(1e-10) {
        return Err(GapError::InvalidArgument(format!("||xhat||_1 = {xhat_l1} exceeds ||x0||_1 = {x0_l1}")));
    }
    let diff = sub(&inst.xhat, &inst.x0);
    let meas = norm2(&phi.matvec(&diff));
    if meas > T::of(2.0) * inst.eps + T::tol(1e-9) {
        return Err(GapError::InvalidArgument(format!("||Phi (xhat - x0)|| = {meas} exceeds 2 eps = {}", T::of(2.0) * inst.eps)));
    }
    let lambda_phi = smallest_positive_singular_value(phi, T::tol(DEFAULT_RANK_TOL))?;
    let bound = ripnsp_l2_bound(delta_2s, lambda_phi, n, s, inst.eps, T::zero())?.value;
    let actual = norm2(&diff);
    Ok(DisproofReport { lambda_phi, delta_2s, bound, actual, disproven: actual > bound })
}
