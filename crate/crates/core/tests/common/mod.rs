//! Independent brute-force reference implementations used by the integration
//! and acceptance tests. Everything here favors exhaustive enumeration over
//! cleverness and shares no code path with the library's search routines:
//! clique dimensions come from subset enumeration, the unchaining recursions
//! are written literally against naive adjacency matrices with a transitive
//! closure for the merge relation, and Gromov-Hausdorff distances enumerate
//! every correspondence.

use unchain_core::dendrogram::Dendrogram;
use unchain_core::metric::FiniteMetricSpace;
use unchain_core::partition::Partition;

/// Max clique size over the threshold graph on `subset`, by trying all
/// 2^|subset| vertex sets.
pub fn brute_clique_size(space: &FiniteMetricSpace<f64>, subset: &[u32], t: f64) -> usize {
    let m = subset.len();
    assert!(m <= 20, "brute-force clique search is exponential");
    let mut best = 0usize;
    for mask in 1u32..(1 << m) {
        let members: Vec<u32> = (0..m)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| subset[i])
            .collect();
        if is_clique(space, &members, t) {
            best = best.max(members.len());
        }
    }
    best
}

fn is_clique(space: &FiniteMetricSpace<f64>, members: &[u32], t: f64) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(ai, &a)| members[ai + 1..].iter().all(|&b| *space.d(a, b) <= t))
}

pub fn brute_rips_dimension(space: &FiniteMetricSpace<f64>, subset: &[u32], t: f64) -> usize {
    brute_clique_size(space, subset, t) - 1
}

/// Max dimension over cliques meeting both blocks; `None` without a crossing
/// edge.
pub fn brute_crossing_dim(
    space: &FiniteMetricSpace<f64>,
    bj: &[u32],
    bk: &[u32],
    t: f64,
) -> Option<usize> {
    let union: Vec<u32> = bj.iter().chain(bk.iter()).copied().collect();
    let m = union.len();
    assert!(m <= 20, "brute-force clique search is exponential");
    let mut best: Option<usize> = None;
    for mask in 1u32..(1 << m) {
        let members: Vec<u32> = (0..m)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| union[i])
            .collect();
        let hits_j = members.iter().any(|x| bj.contains(x));
        let hits_k = members.iter().any(|x| bk.contains(x));
        if hits_j && hits_k && is_clique(space, &members, t) {
            let dim = members.len() - 1;
            best = Some(best.map_or(dim, |b| b.max(dim)));
        }
    }
    best
}

fn brute_condition_i(space: &FiniteMetricSpace<f64>, bj: &[u32], bk: &[u32], t: f64) -> bool {
    bj.iter().any(|&x| bk.iter().any(|&y| *space.d(x, y) <= t))
}

fn brute_condition_ii(
    space: &FiniteMetricSpace<f64>,
    bj: &[u32],
    bk: &[u32],
    t: f64,
    alpha: f64,
) -> bool {
    match brute_crossing_dim(space, bj, bk, t) {
        None => false,
        Some(crossing) => {
            let dim_j = brute_rips_dimension(space, bj, t);
            let dim_k = brute_rips_dimension(space, bk, t);
            alpha * crossing as f64 >= dim_j.min(dim_k) as f64
        }
    }
}

/// Literal transcription of the SL(α) / SL*(α) recursions over the distance
/// grid, one quotient pass per grid value. `alpha` should be a small integer
/// so the floating-point gate below is exact.
pub fn brute_unchaining(
    space: &FiniteMetricSpace<f64>,
    alpha: f64,
    star: bool,
) -> Dendrogram<f64> {
    let n = space.n();
    let mut blocks: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
    let mut heights = vec![0.0];
    let mut levels = vec![Partition::singletons(n)];
    for t in space.distinct_positive_values() {
        if blocks.len() == 1 {
            break;
        }
        let m = blocks.len();
        let mut adj = vec![vec![false; m]; m];
        for i in 0..m {
            for j in (i + 1)..m {
                if brute_condition_i(space, &blocks[i], &blocks[j], t)
                    && brute_condition_ii(space, &blocks[i], &blocks[j], t, alpha)
                {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        let related = if star {
            star_relation(&blocks, &adj, alpha)
        } else {
            adj.clone()
        };
        let classes = closure_classes(&related);
        let mut merged: Vec<Vec<u32>> = classes
            .iter()
            .map(|class| {
                let mut points: Vec<u32> = class
                    .iter()
                    .flat_map(|&b| blocks[b].iter().copied())
                    .collect();
                points.sort_unstable();
                points
            })
            .collect();
        merged.sort_by_key(|b| b[0]);
        if merged.len() != blocks.len() {
            blocks = merged;
            heights.push(t);
            levels.push(Partition::new(n, blocks.clone()).unwrap());
        }
    }
    Dendrogram::new(heights, levels).expect("brute recursion builds a dendrogram")
}

/// The SL*(α) relation, written straight from its two clauses; returns a
/// relation matrix to be closed transitively.
fn star_relation(blocks: &[Vec<u32>], adj: &[Vec<bool>], alpha: f64) -> Vec<Vec<bool>> {
    let m = blocks.len();
    let mut related = vec![vec![false; m]; m];
    for component in closure_classes(adj) {
        let max_size = component.iter().map(|&b| blocks[b].len()).max().unwrap();
        let is_big: Vec<bool> = component
            .iter()
            .map(|&b| alpha * blocks[b].len() as f64 >= max_size as f64)
            .collect();
        let big: Vec<usize> = component
            .iter()
            .zip(&is_big)
            .filter(|(_, &b)| b)
            .map(|(&x, _)| x)
            .collect();
        let small: Vec<usize> = component
            .iter()
            .zip(&is_big)
            .filter(|(_, &b)| !b)
            .map(|(&x, _)| x)
            .collect();
        let h_comps = induced_components(&big, adj);
        let s_comps = induced_components(&small, adj);
        // clause iii: same piece of the big subgraph
        for piece in &h_comps {
            for &a in piece {
                for &b in piece {
                    related[a][b] = true;
                }
            }
        }
        // clause iv: big block in piece C, small block in group C', and no
        // big block outside C adjacent to any block of C'
        for piece in &h_comps {
            for group in &s_comps {
                let outside_adjacent = big
                    .iter()
                    .filter(|b| !piece.contains(b))
                    .any(|&b| group.iter().any(|&s| adj[b][s]));
                if !outside_adjacent {
                    for &a in piece {
                        for &s in group {
                            related[a][s] = true;
                            related[s][a] = true;
                        }
                    }
                }
            }
        }
    }
    related
}

fn induced_components(members: &[usize], adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; members.len()];
    let mut out = Vec::new();
    for start in 0..members.len() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(members[i]);
            for j in 0..members.len() {
                if !seen[j] && adj[members[i]][members[j]] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort_by_key(|c| c[0]);
    out
}

/// Equivalence classes of the reflexive-transitive closure of a relation.
fn closure_classes(related: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let m = related.len();
    let mut reach: Vec<Vec<bool>> = related.to_vec();
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..m {
        for i in 0..m {
            if reach[i][k] {
                for j in 0..m {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut seen = vec![false; m];
    let mut classes = Vec::new();
    for i in 0..m {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (0..m).filter(|&j| reach[i][j] || reach[j][i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        classes.push(class);
    }
    classes
}

/// Exact Gromov-Hausdorff distance by enumerating every correspondence.
/// Usable only for |X|·|Y| ≤ ~16.
pub fn brute_gh(x: &FiniteMetricSpace<f64>, y: &FiniteMetricSpace<f64>) -> f64 {
    let nx = x.n();
    let ny = y.n();
    let bits = nx * ny;
    assert!(bits <= 16, "brute-force GH enumerates 2^(|X||Y|) relations");
    let mut best = f64::INFINITY;
    'masks: for mask in 1u32..(1 << bits) {
        for i in 0..nx {
            if (0..ny).all(|j| mask & (1 << (i * ny + j)) == 0) {
                continue 'masks;
            }
        }
        for j in 0..ny {
            if (0..nx).all(|i| mask & (1 << (i * ny + j)) == 0) {
                continue 'masks;
            }
        }
        let pairs: Vec<(u32, u32)> = (0..bits)
            .filter(|&b| mask & (1 << b) != 0)
            .map(|b| ((b / ny) as u32, (b % ny) as u32))
            .collect();
        let mut worst = 0f64;
        for (pi, &(xa, ya)) in pairs.iter().enumerate() {
            for &(xb, yb) in &pairs[pi..] {
                worst = worst.max((x.d(xa, xb) - y.d(ya, yb)).abs());
            }
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
    }
    best / 2.0
}
