//! k-nearest-neighbour hyperconnectomes and the normalized propagation
//! operator used by hypergraph convolution.
//!
//! Each view contributes one hyperedge per node: the node itself plus the `k`
//! nodes it is most strongly connected to. Views are stacked horizontally so
//! a subject with `M` views over `N` nodes has an `N × M·N` incidence matrix.

use crate::data::{ConnectivityMatrix, MultiViewConnectome};
use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Default neighbourhood size.
pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperconnectome {
    incidence: Matrix,
    edge_weights: Vec<f64>,
    vertex_degrees: Vec<f64>,
    edge_degrees: Vec<f64>,
    k: usize,
    n_views: usize,
}

impl Hyperconnectome {
    /// Binary `N × M·N` incidence; column `b·N + v` is the view-`b` hyperedge
    /// centered on `v`.
    pub fn incidence(&self) -> &Matrix {
        &self.incidence
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn vertex_degrees(&self) -> &[f64] {
        &self.vertex_degrees
    }

    pub fn edge_degrees(&self) -> &[f64] {
        &self.edge_degrees
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_views(&self) -> usize {
        self.n_views
    }

    pub fn n_nodes(&self) -> usize {
        self.incidence.rows()
    }

    pub fn n_edges(&self) -> usize {
        self.incidence.cols()
    }
}

/// Horizontal stack of every view's connectivity matrix (`N × M·N`). Row `i`
/// is the feature vector of node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StackedFeatures {
    values: Matrix,
}

impl StackedFeatures {
    pub fn values(&self) -> &Matrix {
        &self.values
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k + 1 > n {
        return Err(Error::Parameter(format!(
            "k must lie in [1, N-1] = [1, {}], got {k}",
            n.saturating_sub(1)
        )));
    }
    Ok(())
}

/// Indices of the `k` nodes with the largest connectivity to `center`,
/// highest first, ties going to the lower index.
pub fn nearest_neighbors(x: &Matrix, center: usize, k: usize) -> Vec<usize> {
    let row = x.row(center);
    let mut candidates: Vec<usize> = (0..row.len()).filter(|&i| i != center).collect();
    // stable sort keeps ascending index order among equal weights
    candidates.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
    candidates.truncate(k);
    candidates
}

/// `N × N` incidence for one view: column `j` holds node `j` and its `k`
/// nearest neighbours.
pub fn build_view_incidence(x: &ConnectivityMatrix, k: usize) -> Result<Matrix> {
    let values = x.values();
    let n = values.rows();
    check_k(k, n)?;
    let mut h = Matrix::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = 1.0;
        for i in nearest_neighbors(values, j, k) {
            h[(i, j)] = 1.0;
        }
    }
    Ok(h)
}

pub fn build_hyperconnectome(
    subject: &MultiViewConnectome,
    k: usize,
) -> Result<(Hyperconnectome, StackedFeatures)> {
    check_k(k, subject.n_nodes())?;
    let blocks = subject
        .views()
        .iter()
        .map(|v| build_view_incidence(v, k))
        .collect::<Result<Vec<_>>>()?;
    let incidence = Matrix::hstack(&blocks.iter().collect::<Vec<_>>())?;
    let features = Matrix::hstack(&subject.views().iter().map(|v| v.values()).collect::<Vec<_>>())?;

    let n_edges = incidence.cols();
    let edge_weights = vec![1.0; n_edges];
    let vertex_degrees = (0..incidence.rows())
        .map(|v| {
            incidence
                .row(v)
                .iter()
                .zip(&edge_weights)
                .map(|(h, w)| h * w)
                .sum()
        })
        .collect();
    let edge_degrees = incidence.column_sums().into_vec();

    Ok((
        Hyperconnectome {
            incidence,
            edge_weights,
            vertex_degrees,
            edge_degrees,
            k,
            n_views: subject.n_views(),
        },
        StackedFeatures { values: features },
    ))
}

/// `Δ = D_v^{-1/2} H W D_e^{-1} Hᵀ D_v^{-1/2}`, evaluated entrywise so the
/// result is exactly symmetric.
pub fn propagation_operator(h: &Hyperconnectome) -> Result<Matrix> {
    if let Some(v) = h.vertex_degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::Degenerate(format!("vertex {v} has zero degree")));
    }
    if let Some(e) = h.edge_degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::Degenerate(format!("hyperedge {e} is empty")));
    }
    let n = h.n_nodes();
    let edge_scale: Vec<f64> = h
        .edge_weights
        .iter()
        .zip(&h.edge_degrees)
        .map(|(w, d)| w / d)
        .collect();
    let inv_sqrt_deg: Vec<f64> = h.vertex_degrees.iter().map(|d| 1.0 / d.sqrt()).collect();

    let mut delta = Matrix::zeros(n, n);
    for i in 0..n {
        let hi = h.incidence.row(i);
        for j in 0..=i {
            let hj = h.incidence.row(j);
            let s: f64 = hi
                .iter()
                .zip(hj)
                .zip(&edge_scale)
                .map(|((a, b), w)| a * b * w)
                .sum();
            let v = s * inv_sqrt_deg[i] * inv_sqrt_deg[j];
            delta[(i, j)] = v;
            delta[(j, i)] = v;
        }
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conn(rows: &[&[f64]]) -> ConnectivityMatrix {
        crate::data::symmetrize(&Matrix::from_rows(rows).unwrap(), 1).unwrap()
    }

    fn ones_in_column(h: &Matrix, j: usize) -> Vec<usize> {
        (0..h.rows()).filter(|&i| h[(i, j)] == 1.0).collect()
    }

    #[test]
    fn full_neighbourhood_gives_all_ones() {
        let x = conn(&[
            &[0.0, 0.2, 0.3, 0.4],
            &[0.2, 0.0, 0.5, 0.6],
            &[0.3, 0.5, 0.0, 0.7],
            &[0.4, 0.6, 0.7, 0.0],
        ]);
        assert_eq!(build_view_incidence(&x, 3).unwrap(), Matrix::filled(4, 4, 1.0));
    }

    #[test]
    fn picks_strongest_connections() {
        // row 0 = [0, .9, .1, .5]; by brute force the two largest are nodes 1 and 3
        let x = conn(&[
            &[0.0, 0.9, 0.1, 0.5],
            &[0.9, 0.0, 0.3, 0.2],
            &[0.1, 0.3, 0.0, 0.4],
            &[0.5, 0.2, 0.4, 0.0],
        ]);
        let h = build_view_incidence(&x, 2).unwrap();
        assert_eq!(ones_in_column(&h, 0), vec![0, 1, 3]);
    }

    #[test]
    fn ties_go_to_lower_index() {
        for n in 2..=5 {
            let x = crate::data::symmetrize(&Matrix::filled(n, n, 1.0), 1).unwrap();
            let h = build_view_incidence(&x, 1).unwrap();
            for j in 0..n {
                let lowest_other = if j == 0 { 1 } else { 0 };
                let mut expected = vec![j, lowest_other];
                expected.sort();
                assert_eq!(ones_in_column(&h, j), expected, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn k_out_of_range() {
        let x = conn(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 3.0], &[2.0, 3.0, 0.0]]);
        assert!(matches!(build_view_incidence(&x, 0), Err(Error::Parameter(_))));
        assert!(matches!(build_view_incidence(&x, 3), Err(Error::Parameter(_))));
    }

    #[test]
    fn negative_weights_rank_below_positive() {
        let x = conn(&[&[0.0, -2.0, 0.5], &[-2.0, 0.0, -1.0], &[0.5, -1.0, 0.0]]);
        let h = build_view_incidence(&x, 1).unwrap();
        assert_eq!(ones_in_column(&h, 0), vec![0, 2]);
        assert_eq!(ones_in_column(&h, 1), vec![1, 2]);
    }

    #[test]
    fn degenerate_degrees_are_reported() {
        let h = Hyperconnectome {
            incidence: Matrix::zeros(2, 2),
            edge_weights: vec![1.0; 2],
            vertex_degrees: vec![0.0; 2],
            edge_degrees: vec![0.0; 2],
            k: 1,
            n_views: 1,
        };
        assert!(matches!(propagation_operator(&h), Err(Error::Degenerate(_))));
    }
}
