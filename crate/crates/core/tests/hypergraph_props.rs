mod common;

use common::{brute_force_incidence, random_connectivity, random_subject, symmetric_eigenvalues};
use hcae::data::{ConnectivityMatrix, MultiViewConnectome};
use hcae::hypergraph::{build_hyperconnectome, build_view_incidence, propagation_operator};
use hcae::numerics::Matrix;
use hcae::seed::{rng, Stream};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_invariants(n in 2usize..=20, m in 1usize..=4, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let k = 1 + ((n - 2) as f64 * k_frac) as usize;
        let s = random_subject(&mut rng(seed, Stream::Synthetic, 0), n, m, None);
        let (h, f) = build_hyperconnectome(&s, k).unwrap();
        let inc = h.incidence();
        prop_assert_eq!(inc.shape(), (n, m * n));
        prop_assert!(inc.as_slice().iter().all(|&v| v == 0.0 || v == 1.0));
        prop_assert!(h.edge_degrees().iter().all(|&d| d == (k + 1) as f64));
        prop_assert_eq!(inc.column_sums().into_vec(), vec![(k + 1) as f64; m * n]);
        prop_assert_eq!(inc.row_sums(), h.vertex_degrees().to_vec());
        for b in 0..m {
            for v in 0..n {
                prop_assert_eq!(inc[(v, b * n + v)], 1.0);
            }
            prop_assert_eq!(&f.values().column_block(b * n, n), s.views()[b].values());
        }
    }

    #[test]
    fn propagation_spectrum(n in 2usize..=24, m in 1usize..=3, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let k = 1 + ((n - 2) as f64 * k_frac) as usize;
        let s = random_subject(&mut rng(seed, Stream::Synthetic, 1), n, m, Some(5));
        let (h, _) = build_hyperconnectome(&s, k).unwrap();
        let delta = propagation_operator(&h).unwrap();
        prop_assert!(delta.max_abs_diff(&delta.transpose()).unwrap() <= 1e-12);
        for ev in symmetric_eigenvalues(&delta) {
            prop_assert!((-1e-10..=1.0 + 1e-9).contains(&ev), "eigenvalue {}", ev);
        }
        let u = Matrix::from_fn(n, 1, |v, _| h.vertex_degrees()[v].sqrt());
        prop_assert!(delta.matmul(&u).unwrap().max_abs_diff(&u).unwrap() <= 1e-10);
    }
}

#[test]
fn matches_rank_count_oracle_with_ties() {
    let mut r = rng(7, Stream::Synthetic, 2);
    for trial in 0..1000 {
        let n = 2 + trial % 5;
        let levels = if trial % 2 == 0 { Some(3) } else { None };
        let x = random_connectivity(&mut r, n, levels, 1);
        for k in 1..n {
            assert_eq!(build_view_incidence(&x, k).unwrap(), brute_force_incidence(x.values(), k), "trial {trial} k {k}");
        }
    }
}

fn permute(x: &ConnectivityMatrix, perm: &[usize]) -> ConnectivityMatrix {
    let n = perm.len();
    ConnectivityMatrix::new(Matrix::from_fn(n, n, |i, j| x.values()[(perm[i], perm[j])]), x.view_id()).unwrap()
}

#[test]
fn incidence_and_operator_follow_node_relabeling() {
    // distinct values so the relabeled neighbour sets are unambiguous
    let mut r = rng(3, Stream::Synthetic, 3);
    let perms: [&[usize]; 4] = [&[0, 1, 2, 3, 4, 5], &[1, 0, 2, 3, 4, 5], &[5, 4, 3, 2, 1, 0], &[3, 5, 0, 4, 1, 2]];
    for perm in perms {
        for _ in 0..10 {
            let views: Vec<_> = (1..=2).map(|v| random_connectivity(&mut r, 6, None, v)).collect();
            let s = MultiViewConnectome::new("s", views.clone(), None).unwrap();
            let ps = MultiViewConnectome::new("s", views.iter().map(|v| permute(v, perm)).collect(), None).unwrap();
            let (h, _) = build_hyperconnectome(&s, 2).unwrap();
            let (hp, _) = build_hyperconnectome(&ps, 2).unwrap();
            // vertex i and the edge centred on i in the new labeling are perm[i] in the old
            let expected = Matrix::from_fn(6, 12, |i, c| {
                let (b, j) = (c / 6, c % 6);
                h.incidence()[(perm[i], b * 6 + perm[j])]
            });
            assert_eq!(hp.incidence(), &expected);
            let d = propagation_operator(&h).unwrap();
            let dp = propagation_operator(&hp).unwrap();
            let expected = Matrix::from_fn(6, 6, |i, j| d[(perm[i], perm[j])]);
            assert!(dp.max_abs_diff(&expected).unwrap() < 1e-14);
        }
    }
}

#[test]
fn single_view_reduces_to_view_incidence() {
    let s = random_subject(&mut rng(4, Stream::Synthetic, 4), 9, 1, None);
    let (h, _) = build_hyperconnectome(&s, 3).unwrap();
    assert_eq!(h.incidence(), &build_view_incidence(&s.views()[0], 3).unwrap());
    assert_eq!(h.n_edges(), 9);
}

#[test]
fn complete_hyperedges_have_uniform_degrees() {
    let s = random_subject(&mut rng(5, Stream::Synthetic, 5), 7, 3, None);
    let (h, _) = build_hyperconnectome(&s, 6).unwrap();
    assert!(h.vertex_degrees().iter().all(|&d| d == 21.0));
    assert!(h.edge_degrees().iter().all(|&d| d == 7.0));
}
