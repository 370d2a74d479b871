//! Brute-force references the library results are checked against. None of
//! them calls into the certifier or the solver.

#![allow(dead_code)]

use itertools::Itertools;
use nspgap_core::linalg::{norm1, DenseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix<f64> {
    let data = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    DenseMatrix::new(rows, cols, data).unwrap()
}

/// Gaussian matrix with unit-norm columns.
pub fn normalized_gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix<f64> {
    let g = gaussian_matrix(rows, cols, rng);
    let cols_v: Vec<Vec<f64>> = g
        .columns()
        .into_iter()
        .map(|c| {
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            c.into_iter().map(|x| x / n).collect()
        })
        .collect();
    DenseMatrix::from_columns(rows, &cols_v).unwrap()
}

pub fn gaussian_vectors(count: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..count).map(|_| (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect()
}

pub fn sparse_vector(n: usize, s: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for i in rand::seq::index::sample(rng, n, s).into_iter() {
        let m: f64 = rng.gen_range(0.5..2.0);
        x[i] = if rng.gen_bool(0.5) { m } else { -m };
    }
    x
}

/// `max over |T| = s of ||v_T||_1 / ||v_{T^c}||_1` for one vector: the top `s` magnitudes against the rest.
pub fn best_support_ratio(v: &[f64], s: usize) -> f64 {
    let mut a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    a.sort_by(|x, y| y.total_cmp(x));
    let head: f64 = a[..s].iter().sum();
    let tail: f64 = a[s..].iter().sum();
    if tail <= 1e-300 {
        f64::INFINITY
    } else {
        head / tail
    }
}

fn combine(basis: &[Vec<f64>], c: &[f64]) -> Vec<f64> {
    let n = basis[0].len();
    (0..n).map(|i| basis.iter().zip(c).map(|(b, &ci)| b[i] * ci).sum()).collect()
}

/// Unit vector spanning the null space of `rows` (`d - 1` vectors in `R^d`, `d <= 3`), if it is one-dimensional.
fn null_direction(rows: &[Vec<f64>], d: usize) -> Option<Vec<f64>> {
    let v = match d {
        1 => vec![1.0],
        2 => vec![-rows[0][1], rows[0][0]],
        3 => {
            let (a, b) = (&rows[0], &rows[1]);
            vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        }
        _ => panic!("null_direction supports d <= 3"),
    };
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = rows.iter().flatten().map(|x| x.abs()).fold(1.0, f64::max);
    (n > 1e-12 * scale * scale).then(|| v.into_iter().map(|x| x / n).collect())
}

/// Exact NSP constant by enumerating the vertices of `{c : ||(Bc)_{T^c}||_1 <= 1}`.
///
/// For each support `T`, a convex objective over that polytope peaks at a
/// vertex, and every vertex annihilates `d - 1` independent rows of
/// `B_{T^c}`. `basis` holds the kernel basis vectors, `d <= 3`.
pub fn vertex_nsp_constant(basis: &[Vec<f64>], s: usize) -> f64 {
    let d = basis.len();
    let n = basis[0].len();
    let row = |j: usize| -> Vec<f64> { basis.iter().map(|b| b[j]).collect() };
    (0..n)
        .combinations(s)
        .map(|support| {
            let comp: Vec<usize> = (0..n).filter(|j| !support.contains(j)).collect();
            let h: Vec<Vec<f64>> = comp.iter().map(|&j| row(j)).collect();
            let rank_deficient = {
                let m = DenseMatrix::from_rows(&h).unwrap();
                let f = nspgap_core::linalg::svd(&m);
                f.rank(1e-10) < d
            };
            if rank_deficient {
                return f64::INFINITY;
            }
            let mut best: f64 = 0.0;
            for active in (0..comp.len()).combinations(d - 1) {
                let rows: Vec<Vec<f64>> = active.iter().map(|&k| h[k].clone()).collect();
                let Some(c) = null_direction(&rows, d) else { continue };
                let v = combine(basis, &c);
                let tail: f64 = comp.iter().map(|&j| v[j].abs()).sum();
                if tail <= 1e-14 {
                    continue;
                }
                let head: f64 = support.iter().map(|&j| v[j].abs()).sum();
                best = best.max(head / tail);
            }
            best
        })
        .fold(0.0, f64::max)
}

fn random_unit(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-9 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Lower estimate of the NSP constant from `samples` random kernel vectors,
/// followed by a shrinking local search from the best few.
pub fn sampled_nsp_constant(basis: &[Vec<f64>], s: usize, samples: usize, seed: u64) -> f64 {
    let d = basis.len();
    let chunks = 64;
    let per = samples.div_ceil(chunks);
    let mut starts: Vec<(f64, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut r = rng(seed.wrapping_mul(1_000_003).wrapping_add(k as u64));
            let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
            for _ in 0..per {
                let c = random_unit(d, &mut r);
                let val = best_support_ratio(&combine(basis, &c), s);
                if val > best.0 {
                    best = (val, c);
                }
            }
            best
        })
        .collect();
    starts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut r = rng(seed ^ 0xabcdef);
    starts
        .into_iter()
        .take(8)
        .map(|(mut val, mut c)| {
            let mut step = 1e-2;
            while step > 1e-12 {
                let mut improved = false;
                for _ in 0..64 {
                    let dir = random_unit(d, &mut r);
                    let trial: Vec<f64> = c.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
                    let v = best_support_ratio(&combine(basis, &trial), s);
                    if v > val {
                        val = v;
                        c = trial;
                        improved = true;
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
            val
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `delta_k` by sampling unit vectors on every support: `max | ||Phi x||^2 - 1 |`.
pub fn sampled_rip_constant(phi: &DenseMatrix<f64>, k: usize, per_support: usize, seed: u64) -> f64 {
    let n = phi.cols();
    let supports: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    supports
        .par_iter()
        .enumerate()
        .map(|(idx, t)| {
            let mut r = rng(seed.wrapping_add(idx as u64));
            let sub = phi.select_columns(t);
            (0..per_support)
                .map(|_| {
                    let c = random_unit(k, &mut r);
                    let y = sub.matvec(&c);
                    (y.iter().map(|x| x * x).sum::<f64>() - 1.0).abs()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

fn solve_square(a: &DenseMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    let mut m: Vec<Vec<f64>> = (0..n).map(|i| a.row(i).iter().copied().chain([b[i]]).collect()).collect();
    let scale = a.max_abs().max(1.0);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[p][col].abs() < 1e-10 * scale {
            return None;
        }
        m.swap(col, p);
        let pivot = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col {
                let f = row[col] / pivot[col];
                for (a, &b) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *a -= f * b;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Minimum of `||x||_1` over `Phi x = y` by enumerating basic solutions; `Phi` must have full row rank.
pub fn bp_by_vertices(phi: &DenseMatrix<f64>, y: &[f64]) -> (f64, Vec<f64>) {
    let (m, n) = phi.shape();
    let mut best = (f64::INFINITY, vec![0.0; n]);
    for cols in (0..n).combinations(m) {
        let Some(xs) = solve_square(&phi.select_columns(&cols), y) else { continue };
        let mut x = vec![0.0; n];
        for (&j, v) in cols.iter().zip(xs) {
            x[j] = v;
        }
        let l1 = norm1(&x);
        if l1 < best.0 {
            best = (l1, x);
        }
    }
    best
}

/// `min over |T| = s of ||x_{T^c}||_1` by enumerating supports.
pub fn sigma_s_by_supports(x: &[f64], s: usize) -> f64 {
    (0..x.len())
        .combinations(s)
        .map(|t| x.iter().enumerate().filter(|(i, _)| !t.contains(i)).map(|(_, v)| v.abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}
