mod common;

use common::{gaussian_matrix, gaussian_vectors, rng, sampled_nsp_constant, vertex_nsp_constant};
use nspgap_core::certify::{has_nsp, l1_ratio, nsp_constant, NspOptions};
use nspgap_core::linalg::DenseMatrix;
use nspgap_core::matrixlab::{kernel_basis, row_transform, Subspace};
use proptest::prelude::*;

fn span(n: usize, vecs: &[Vec<f64>]) -> Subspace<f64> {
    Subspace::span_of(n, vecs, 1e-10).unwrap()
}

fn gamma(kernel: &Subspace<f64>, s: usize) -> f64 {
    nsp_constant(kernel, s, &NspOptions::default()).unwrap().gamma
}

#[test]
fn all_ones_kernel() {
    let k = span(4, &[vec![1.0; 4]]);
    assert!((gamma(&k, 1) - 1.0 / 3.0).abs() < 1e-12);
    assert!((gamma(&k, 2) - 1.0).abs() < 1e-12);
    let (ok, _) = has_nsp(&k, 1, 0.5, &NspOptions::default()).unwrap();
    assert!(ok);
}

#[test]
fn agrees_with_vertex_enumeration() {
    let mut r = rng(11);
    for trial in 0..30 {
        let n = 5 + trial % 6;
        let d = 1 + trial % 3;
        let s = 1 + trial % 2;
        let basis = gaussian_vectors(d, n, &mut r);
        let lp = gamma(&span(n, &basis), s);
        let exact = vertex_nsp_constant(&basis, s);
        assert!((lp - exact).abs() <= 1e-8 * exact.max(1.0), "trial {trial}: lp {lp} vertex {exact}");
    }
}

#[test]
fn sampling_never_exceeds_the_certificate() {
    let mut r = rng(12);
    for trial in 0..6 {
        let basis = gaussian_vectors(2 + trial % 2, 8, &mut r);
        let lp = gamma(&span(8, &basis), 2);
        let sampled = sampled_nsp_constant(&basis, 2, 20_000, trial as u64);
        assert!(sampled <= lp + 1e-9, "sampled {sampled} above lp {lp}");
        assert!(lp - sampled <= 1e-3, "sampled {sampled} far below lp {lp}");
    }
}

#[test]
fn witness_attains_the_constant() {
    let mut r = rng(13);
    let basis = gaussian_vectors(3, 9, &mut r);
    let cert = nsp_constant(&span(9, &basis), 2, &NspOptions::default()).unwrap();
    let ratio = l1_ratio(&cert.witness, &cert.worst_support);
    assert!((ratio - cert.gamma).abs() < 1e-10);
    let k = span(9, &basis);
    assert!(k.residual(&cert.witness) < 1e-9);
}

#[test]
fn sparse_kernel_vector_is_infinite() {
    let k = span(5, &[vec![1.0, -2.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0, 1.0, 1.0]]);
    let cert = nsp_constant(&k, 2, &NspOptions::default()).unwrap();
    assert!(cert.is_infinite());
    assert_eq!(cert.worst_support, vec![0, 1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nondecreasing_in_order(seed in any::<u64>(), n in 6usize..10, d in 1usize..4) {
        let basis = gaussian_vectors(d, n, &mut rng(seed));
        let k = span(n, &basis);
        let g1 = gamma(&k, 1);
        let g2 = gamma(&k, 2);
        prop_assert!(g1 <= g2 + 1e-9);
    }

    #[test]
    fn row_action_leaves_constant_unchanged(seed in any::<u64>()) {
        let mut r = rng(seed);
        let phi = gaussian_matrix(5, 8, &mut r);
        let u = gaussian_matrix(5, 5, &mut r);
        let Ok(uphi) = row_transform(&u, &phi, 1e-8) else { return Ok(()) };
        let a = gamma(&kernel_basis(&phi, 1e-10).unwrap(), 2);
        let b = gamma(&kernel_basis(&uphi, 1e-10).unwrap(), 2);
        prop_assert!((a - b).abs() <= 1e-7 * a.max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn coordinate_permutation_and_sign_flips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let basis = gaussian_vectors(2, 7, &mut r);
        let perm = [3usize, 0, 6, 1, 5, 2, 4];
        let signs = [1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0];
        let moved: Vec<Vec<f64>> = basis.iter().map(|b| perm.iter().zip(signs).map(|(&p, sg)| sg * b[p]).collect()).collect();
        let a = gamma(&span(7, &basis), 2);
        let b = gamma(&span(7, &moved), 2);
        prop_assert!((a - b).abs() <= 1e-8 * a.max(1.0));
    }

    #[test]
    fn coordinate_scaling_changes_the_constant_consistently(seed in any::<u64>(), factor in 2.0f64..5.0) {
        // Scaling one coordinate of every kernel vector up cannot lower the
        // constant when that coordinate is on the worst support.
        let basis = gaussian_vectors(2, 7, &mut rng(seed));
        let cert = nsp_constant(&span(7, &basis), 1, &NspOptions::default()).unwrap();
        let j = cert.worst_support[0];
        let scaled: Vec<Vec<f64>> = basis.iter().map(|b| b.iter().enumerate().map(|(i, &x)| if i == j { factor * x } else { x }).collect()).collect();
        let after = gamma(&span(7, &scaled), 1);
        prop_assert!(after >= cert.gamma - 1e-9);
    }
}

#[test]
fn full_rank_matrix_has_zero_constant() {
    let phi = DenseMatrix::<f64>::identity(4);
    let k = kernel_basis(&phi, 1e-10).unwrap();
    assert_eq!(k.dim(), 0);
    assert_eq!(gamma(&k, 2), 0.0);
}
