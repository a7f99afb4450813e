//! Cross-checks of the optimized search paths against the exhaustive
//! reference implementations in `common`.

mod common;

use common::{brute_crossing_dim, brute_gh, brute_rips_dimension, brute_unchaining};
use unchain_core::alpha::Alpha;
use unchain_core::gh::{gh_exact, GhOutcome};
use unchain_core::instances::{
    barbell_k4, bridged_k4, random_clique_chain, random_graph_metric, random_metric,
};
use unchain_core::rips::{max_crossing_clique_dim, rips_dimension};
use unchain_core::unchaining::{sl_alpha_dendrogram, sl_star_alpha_dendrogram};

#[test]
fn rips_dimension_matches_subset_enumeration() {
    for seed in 0..30u64 {
        let n = 4 + (seed as usize % 7);
        let space = random_metric(n, seed);
        let subset: Vec<u32> = (0..n as u32).collect();
        for t in space.distinct_positive_values() {
            assert_eq!(
                rips_dimension(&space, &subset, &t).unwrap(),
                brute_rips_dimension(&space, &subset, t),
                "seed {seed}, t {t}"
            );
        }
    }
}

#[test]
fn crossing_dim_matches_subset_enumeration() {
    for seed in 0..30u64 {
        let n = 5 + (seed as usize % 5);
        let space = random_metric(n, seed.wrapping_mul(77).wrapping_add(5));
        let cut = 2 + (seed as usize % (n - 3));
        let bj: Vec<u32> = (0..cut as u32).collect();
        let bk: Vec<u32> = (cut as u32..n as u32).collect();
        for t in space.distinct_positive_values() {
            assert_eq!(
                max_crossing_clique_dim(&space, &bj, &bk, &t).unwrap(),
                brute_crossing_dim(&space, &bj, &bk, t),
                "seed {seed}, t {t}"
            );
        }
    }
}

#[test]
fn barbell_crossing_dims() {
    let pair = barbell_k4(&0.1f64);
    let bj: Vec<u32> = (0..4).collect();
    let bk: Vec<u32> = (4..8).collect();
    assert_eq!(
        max_crossing_clique_dim(&pair.perturbed, &bj, &bk, &1.1).unwrap(),
        Some(1)
    );
    assert_eq!(
        max_crossing_clique_dim(&pair.perturbed, &bj, &bk, &2.1).unwrap(),
        Some(4)
    );
    assert_eq!(brute_crossing_dim(&pair.perturbed, &bj, &bk, 1.1), Some(1));
    assert_eq!(brute_crossing_dim(&pair.perturbed, &bj, &bk, 2.1), Some(4));
}

#[test]
fn unchaining_matches_literal_recursion() {
    for seed in 0..40u64 {
        let space = if seed % 3 == 0 {
            random_clique_chain(seed)
        } else {
            random_graph_metric(4 + (seed as usize % 6), seed)
        };
        if space.n() > 14 {
            continue; // keep the exponential oracle affordable
        }
        for alpha in [1u32, 2, 3] {
            let a = Alpha::integer(alpha);
            assert_eq!(
                sl_alpha_dendrogram(&space, &a),
                brute_unchaining(&space, alpha as f64, false),
                "plain, seed {seed}, alpha {alpha}"
            );
            assert_eq!(
                sl_star_alpha_dendrogram(&space, &a),
                brute_unchaining(&space, alpha as f64, true),
                "star, seed {seed}, alpha {alpha}"
            );
        }
    }
}

#[test]
fn bridged_instance_matches_literal_recursion() {
    let space = bridged_k4::<f64>();
    for alpha in [1u32, 2, 3] {
        let a = Alpha::integer(alpha);
        assert_eq!(
            sl_star_alpha_dendrogram(&space, &a),
            brute_unchaining(&space, alpha as f64, true),
        );
        assert_eq!(
            sl_alpha_dendrogram(&space, &a),
            brute_unchaining(&space, alpha as f64, false),
        );
    }
}

#[test]
fn gh_matches_full_enumeration_on_tiny_spaces() {
    for seed in 0..25u64 {
        let nx = 2 + (seed as usize % 3);
        let ny = 2 + ((seed / 3) as usize % 3);
        if nx * ny > 16 {
            continue;
        }
        let x = random_metric(nx.max(2), seed.wrapping_mul(13).wrapping_add(1));
        let y = random_metric(ny.max(2), seed.wrapping_mul(29).wrapping_add(2));
        let expected = brute_gh(&x, &y);
        match gh_exact(&x, &y, 10_000_000) {
            GhOutcome::Exact(v) => {
                assert!(
                    (v - expected).abs() < 1e-12,
                    "seed {seed}: search {v} vs enumeration {expected}"
                );
            }
            GhOutcome::Bounds { .. } => panic!("budget should suffice on tiny spaces"),
        }
    }
}

#[test]
fn gh_triangle_inequality_on_tiny_spaces() {
    for seed in 0..12u64 {
        let a = random_metric(3, seed.wrapping_mul(3).wrapping_add(11));
        let b = random_metric(3, seed.wrapping_mul(5).wrapping_add(12));
        let c = random_metric(3, seed.wrapping_mul(7).wrapping_add(13));
        let ab = brute_gh(&a, &b);
        let bc = brute_gh(&b, &c);
        let ac = brute_gh(&a, &c);
        assert!(ac <= ab + bc + 1e-12, "seed {seed}: {ac} > {ab} + {bc}");
    }
}
