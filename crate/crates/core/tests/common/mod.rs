#![allow(dead_code)]

use hcae::data::{symmetrize, ConnectivityMatrix, MultiViewConnectome};
use hcae::numerics::Matrix;
use rand::Rng;

/// Symmetric matrix with zero diagonal. With `levels` set, values are drawn
/// from that many discrete levels so ties are common.
pub fn random_connectivity(rng: &mut impl Rng, n: usize, levels: Option<u32>, view_id: usize) -> ConnectivityMatrix {
    let raw = Matrix::from_fn(n, n, |_, _| match levels {
        Some(l) => rng.random_range(0..l) as f64 / l as f64,
        None => rng.random_range(-1.0..2.0),
    });
    // keep the upper triangle so quantized values stay on their levels
    let upper = Matrix::from_fn(n, n, |i, j| if i < j { raw[(i, j)] } else { raw[(j, i)] });
    symmetrize(&upper, view_id).unwrap()
}

pub fn random_subject(rng: &mut impl Rng, n: usize, m: usize, levels: Option<u32>) -> MultiViewConnectome {
    let views = (1..=m).map(|v| random_connectivity(rng, n, levels, v)).collect();
    MultiViewConnectome::new("subject", views, None).unwrap()
}

/// Incidence oracle: node `i` joins hyperedge `j` when fewer than `k` other
/// nodes beat it, where `l` beats `i` if `x[j][l] > x[j][i]`, or the two are
/// equal and `l < i`.
pub fn brute_force_incidence(x: &Matrix, k: usize) -> Matrix {
    let n = x.rows();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            return 1.0;
        }
        let beaten_by = (0..n)
            .filter(|&l| l != j && l != i)
            .filter(|&l| x[(j, l)] > x[(j, i)] || (x[(j, l)] == x[(j, i)] && l < i))
            .count();
        if beaten_by < k {
            1.0
        } else {
            0.0
        }
    })
}

/// Eigenvalues of a symmetric matrix from an independent dense solver.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    let dm = nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice());
    dm.symmetric_eigen().eigenvalues.iter().copied().collect()
}
