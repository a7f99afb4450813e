//! Instance generators: the barbell and bridged-barbell witness graphs plus
//! seeded random metric, ultrametric and dendrogram generators.
//!
//! Random combinatorial generators draw from dyadic value grids (multiples of
//! 0.25 or 0.5) so that sums and averages stay exact in floating point; the
//! Euclidean generator provides generic, tie-free distances. Everything is
//! deterministic given its seed.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dendrogram::{dendrogram_to_ultrametric, Dendrogram};
use crate::metric::{default_labels, shortest_path_metric, FiniteMetricSpace, Ultrametric};
use crate::partition::Partition;
use crate::value::Dist;

/// The two-clique bridge graph: unit K4s on `x0..x3` and `y0..y3` joined by
/// the edge `x0-y0`, with distances measured along shortest paths.
pub struct BarbellPair<V: Dist> {
    /// Bridge weight 1: every pair ends at distance 1, 2 or 3.
    pub base: FiniteMetricSpace<V>,
    /// Bridge weight 1+ε: distances become {1, 1+ε, 2+ε, 3+ε}.
    pub perturbed: FiniteMetricSpace<V>,
}

pub fn barbell_k4<V: Dist>(eps: &V) -> BarbellPair<V> {
    assert!(
        eps.cmp_total(&V::zero()) != std::cmp::Ordering::Less,
        "perturbation must be nonnegative"
    );
    let labels: Vec<String> = (0..4)
        .map(|i| format!("x{i}"))
        .chain((0..4).map(|i| format!("y{i}")))
        .collect();
    let mut edges: Vec<(u32, u32, V)> = Vec::new();
    for i in 0..4u32 {
        for j in (i + 1)..4u32 {
            edges.push((i, j, V::one()));
            edges.push((i + 4, j + 4, V::one()));
        }
    }
    let mut base_edges = edges.clone();
    base_edges.push((0, 4, V::one()));
    let mut perturbed_edges = edges;
    perturbed_edges.push((0, 4, V::one().add(eps)));
    BarbellPair {
        base: shortest_path_metric(labels.clone(), &base_edges)
            .expect("barbell graph is connected with positive weights"),
        perturbed: shortest_path_metric(labels, &perturbed_edges)
            .expect("barbell graph is connected with positive weights"),
    }
}

/// Two unit K4s joined through a midpoint `m` with `d(x0,m) = d(m,y0) = 2`,
/// under the shortest-path metric. Single linkage chains through `m` at t=2;
/// the starred method holds the bridge apart until a crossing 5-clique
/// appears at t=5.
pub fn bridged_k4<V: Dist>() -> FiniteMetricSpace<V> {
    let labels: Vec<String> = (0..4)
        .map(|i| format!("x{i}"))
        .chain(std::iter::once("m".to_string()))
        .chain((0..4).map(|i| format!("y{i}")))
        .collect();
    let mut edges: Vec<(u32, u32, V)> = Vec::new();
    let two = V::one().add(&V::one());
    for i in 0..4u32 {
        for j in (i + 1)..4u32 {
            edges.push((i, j, V::one()));
            edges.push((i + 5, j + 5, V::one()));
        }
    }
    edges.push((0, 4, two.clone()));
    edges.push((4, 5, two));
    shortest_path_metric(labels, &edges)
        .expect("bridged barbell graph is connected with positive weights")
}

/// Generic metric from random points in the unit square.
pub fn random_euclidean_metric(n: usize, seed: u64) -> FiniteMetricSpace<f64> {
    assert!(n >= 2, "random generators need n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
            .collect();
        let matrix: Vec<Vec<f64>> = points
            .iter()
            .map(|&(xa, ya)| {
                points
                    .iter()
                    .map(|&(xb, yb)| ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt())
                    .collect()
            })
            .collect();
        if let Ok(space) = FiniteMetricSpace::new(default_labels(n), matrix) {
            return space;
        }
    }
    unreachable!("random unit-square points form a metric")
}

/// Combinatorial metric: shortest-path closure of a random connected graph
/// with weights from a half-integer grid. Produces plenty of ties.
pub fn random_graph_metric(n: usize, seed: u64) -> FiniteMetricSpace<f64> {
    assert!(n >= 2, "random generators need n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    for v in 1..n as u32 {
        let parent = rng.random_range(0..v);
        edges.push((parent, v, *weights.as_slice().choose(&mut rng).unwrap()));
    }
    let extras = rng.random_range(0..=n);
    for _ in 0..extras {
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a != b {
            edges.push((a.min(b), a.max(b), *weights.as_slice().choose(&mut rng).unwrap()));
        }
    }
    shortest_path_metric(default_labels(n), &edges)
        .expect("spanning tree plus extras is connected with positive weights")
}

/// Mixed generator: even seeds draw Euclidean spaces, odd seeds graph metrics.
pub fn random_metric(n: usize, seed: u64) -> FiniteMetricSpace<f64> {
    if seed % 2 == 0 {
        random_euclidean_metric(n, seed)
    } else {
        random_graph_metric(n, seed)
    }
}

/// Random dendrogram built by merging random groups of blocks at increasing
/// quarter-integer heights; occasionally two disjoint groups merge at the
/// same height.
pub fn random_dendrogram(n: usize, seed: u64) -> Dendrogram<f64> {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
    let mut heights = vec![0.0f64];
    let mut levels = vec![Partition::singletons(n)];
    let mut height = 0.0f64;
    while blocks.len() > 1 {
        height += 0.25 * rng.random_range(1..=4) as f64;
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.shuffle(&mut rng);
        let first = rng.random_range(2..=blocks.len());
        let mut groups = vec![order[..first].to_vec()];
        let rest = &order[first..];
        if rest.len() >= 2 && rng.random_bool(0.3) {
            let second = rng.random_range(2..=rest.len());
            groups.push(rest[..second].to_vec());
        }
        let mut merged: Vec<Vec<u32>> = Vec::new();
        let mut used = vec![false; blocks.len()];
        for group in &groups {
            let mut block: Vec<u32> = group
                .iter()
                .flat_map(|&b| blocks[b].iter().copied())
                .collect();
            block.sort_unstable();
            merged.push(block);
            for &b in group {
                used[b] = true;
            }
        }
        for (b, block) in blocks.iter().enumerate() {
            if !used[b] {
                merged.push(block.clone());
            }
        }
        blocks = merged;
        heights.push(height);
        levels.push(Partition::new(n, blocks.clone()).expect("merged groups partition the points"));
    }
    Dendrogram::new(heights, levels).expect("random merge tree is a valid dendrogram")
}

/// Random ultrametric: the dual of a random dendrogram.
pub fn random_ultrametric(n: usize, seed: u64) -> Ultrametric<f64> {
    let d = random_dendrogram(n, seed);
    dendrogram_to_ultrametric(&d, &default_labels(n)).expect("labels match the dendrogram")
}

/// Chains of three unit cliques with bridge edges, randomized over sizes and
/// bridge shapes. These realize the size patterns where raising α changes
/// which blocks count as big, and the history effects where an early merge
/// inflates a block's complex dimension — the instances on which refinement
/// between different α values fails.
pub fn random_clique_chain(seed: u64) -> FiniteMetricSpace<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if rng.random_bool(0.5) {
        // pendant bridges of equal weight: both block-graph edges appear at once
        let s1 = rng.random_range(2..=7);
        let s2 = rng.random_range(2..=3);
        let s3 = rng.random_range(2..=7);
        clique_chain(&[s1, s2, s3], 2.0, BridgeShape::Single, 2.0, BridgeShape::Single)
    } else {
        // single-edge bridge first, double-edge bridge later
        let s1 = rng.random_range(3..=7);
        let s3 = rng.random_range(4..=9);
        clique_chain(&[s1, 3, s3], 2.0, BridgeShape::Single, 3.0, BridgeShape::Double)
    }
}

#[derive(Clone, Copy)]
enum BridgeShape {
    /// one edge between the first vertices of the two cliques
    Single,
    /// two edges from distinct vertices of the left clique to one vertex of the right
    Double,
}

fn clique_chain(
    sizes: &[usize; 3],
    w12: f64,
    shape12: BridgeShape,
    w23: f64,
    shape23: BridgeShape,
) -> FiniteMetricSpace<f64> {
    let total: usize = sizes.iter().sum();
    let start = [0usize, sizes[0], sizes[0] + sizes[1]];
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();
    for (c, &size) in sizes.iter().enumerate() {
        for i in 0..size {
            for j in (i + 1)..size {
                edges.push(((start[c] + i) as u32, (start[c] + j) as u32, 1.0));
            }
        }
    }
    let bridge = |edges: &mut Vec<(u32, u32, f64)>, left: usize, right: usize, w: f64, shape: BridgeShape| {
        match shape {
            BridgeShape::Single => edges.push((start[left] as u32, start[right] as u32, w)),
            BridgeShape::Double => {
                edges.push(((start[left] + 1) as u32, start[right] as u32, w));
                edges.push(((start[left] + 2) as u32, start[right] as u32, w));
            }
        }
    };
    bridge(&mut edges, 0, 1, w12, shape12);
    bridge(&mut edges, 1, 2, w23, shape23);
    shortest_path_metric(default_labels(total), &edges)
        .expect("clique chain is connected with positive weights")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barbell_base_distances() {
        let pair = barbell_k4(&0.1f64);
        let d = &pair.base;
        assert_eq!(*d.d(1, 2), 1.0); // within a clique
        assert_eq!(*d.d(0, 4), 1.0); // the bridge itself
        assert_eq!(*d.d(1, 4), 2.0); // x1-x0-y0
        assert_eq!(*d.d(0, 5), 2.0); // x0-y0-y1
        assert_eq!(*d.d(1, 5), 3.0); // x1-x0-y0-y1
    }

    #[test]
    fn barbell_perturbed_distances() {
        let pair = barbell_k4(&0.1f64);
        let d = &pair.perturbed;
        assert_eq!(*d.d(0, 4), 1.1);
        assert_eq!(*d.d(1, 4), 2.1);
        assert_eq!(*d.d(1, 5), 3.1);
        assert_eq!(
            d.distinct_positive_values(),
            vec![1.0, 1.1, 2.1, 3.1]
        );
    }

    #[test]
    fn bridged_k4_distances() {
        let s = bridged_k4::<f64>();
        assert_eq!(*s.d(0, 4), 2.0); // x0-m
        assert_eq!(*s.d(1, 4), 3.0); // x1-x0-m
        assert_eq!(*s.d(0, 5), 4.0); // x0-m-y0
        assert_eq!(*s.d(1, 5), 5.0); // x1-x0-m-y0
        assert_eq!(*s.d(1, 6), 6.0); // x1-x0-m-y0-y1
        assert_eq!(s.diameter().unwrap(), 6.0);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_metric(5, 42), random_metric(5, 42));
        assert_eq!(
            random_ultrametric(6, 7).space(),
            random_ultrametric(6, 7).space()
        );
        assert_eq!(random_clique_chain(3), random_clique_chain(3));
    }

    #[test]
    fn random_ultrametrics_are_ultrametric() {
        for seed in 0..20 {
            let u = random_ultrametric(2 + (seed as usize % 8), seed);
            assert!(u.space().is_ultrametric());
        }
    }

    #[test]
    fn random_graph_metrics_validate() {
        for seed in 0..20 {
            let s = random_graph_metric(2 + (seed as usize % 9), seed);
            assert!(s.n() >= 2);
        }
    }

    #[test]
    fn rational_barbell_is_exact() {
        use num_rational::BigRational;
        let eps = BigRational::parse_decimal("0.1").unwrap();
        let pair = barbell_k4(&eps);
        assert_eq!(
            *pair.perturbed.d(1, 5),
            BigRational::parse_decimal("3.1").unwrap()
        );
    }
}
