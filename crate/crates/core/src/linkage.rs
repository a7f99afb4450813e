//! The standard linkage-based recursion for single, complete and average
//! linkage, plus an independent MST route to the single-linkage ultrametric.
//!
//! Each round takes the minimum linkage value R over current block pairs,
//! joins every pair at value <= R by an edge, and merges whole connected
//! components at once. Ties need no ordering policy: all pairs achieving R
//! become edges simultaneously, which is what makes the recursion permutation
//! invariant. Complete/average values are recomputed from raw point pairs
//! every round instead of updated incrementally, because coefficient updates
//! reproduce pairwise merging rather than the multi-merge quotient.

use thiserror::Error;

use crate::dendrogram::{DendrogramBuilder, Dendrogram};
use crate::metric::{FiniteMetricSpace, Ultrametric};
use crate::partition::{Partition, UnionFind};
use crate::value::Dist;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinkageError {
    #[error("blocks overlap at point {0}")]
    OverlappingBlocks(u32),
    #[error("blocks must be nonempty")]
    EmptyBlock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkageKind {
    Single,
    Complete,
    Average,
}

impl std::fmt::Display for LinkageKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinkageKind::Single => write!(f, "single"),
            LinkageKind::Complete => write!(f, "complete"),
            LinkageKind::Average => write!(f, "average"),
        }
    }
}

/// Linkage value of two disjoint blocks: min, max, or mean of the cross
/// distances. The mean accumulates in sorted order so the result is
/// independent of block enumeration order even in floating point.
pub fn linkage_value<V: Dist>(
    kind: LinkageKind,
    a: &[u32],
    b: &[u32],
    space: &FiniteMetricSpace<V>,
) -> Result<V, LinkageError> {
    if a.is_empty() || b.is_empty() {
        return Err(LinkageError::EmptyBlock);
    }
    for &x in a {
        if b.contains(&x) {
            return Err(LinkageError::OverlappingBlocks(x));
        }
    }
    Ok(linkage_value_unchecked(kind, a, b, space))
}

fn linkage_value_unchecked<V: Dist>(
    kind: LinkageKind,
    a: &[u32],
    b: &[u32],
    space: &FiniteMetricSpace<V>,
) -> V {
    let mut cross = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| space.d(x, y).clone()));
    match kind {
        LinkageKind::Single => {
            let first = cross.next().expect("blocks are nonempty");
            cross.fold(first, |acc, v| acc.min_of(&v))
        }
        LinkageKind::Complete => {
            let first = cross.next().expect("blocks are nonempty");
            cross.fold(first, |acc, v| acc.max_of(&v))
        }
        LinkageKind::Average => {
            let mut values: Vec<V> = cross.collect();
            values.sort_by(|x, y| x.cmp_total(y));
            let count = values.len();
            let sum = values
                .into_iter()
                .reduce(|acc, v| acc.add(&v))
                .expect("blocks are nonempty");
            sum.div_count(count)
        }
    }
}

/// Multi-merge linkage clustering of a validated space.
pub fn standard_linkage_dendrogram<V: Dist>(
    space: &FiniteMetricSpace<V>,
    kind: LinkageKind,
) -> Dendrogram<V> {
    let n = space.n();
    let mut builder = DendrogramBuilder::new(n);
    let mut blocks: Vec<Vec<u32>> = (0..n as u32).map(|i| vec![i]).collect();
    while blocks.len() > 1 {
        let mut round_min: Option<V> = None;
        let mut values = Vec::with_capacity(blocks.len() * (blocks.len() - 1) / 2);
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                let v = linkage_value_unchecked(kind, &blocks[i], &blocks[j], space);
                round_min = Some(match round_min {
                    Some(m) => m.min_of(&v),
                    None => v.clone(),
                });
                values.push((i, j, v));
            }
        }
        let r = round_min.expect("at least two blocks remain");
        let mut uf = UnionFind::new(blocks.len());
        for (i, j, v) in &values {
            if v.cmp_total(&r) != std::cmp::Ordering::Greater {
                uf.union(*i, *j);
            }
        }
        blocks = merge_blocks(&blocks, uf.classes());
        let level = Partition::new(n, blocks.clone()).expect("merged blocks partition the points");
        builder.push(r, level);
    }
    builder.finish()
}

fn merge_blocks(blocks: &[Vec<u32>], classes: Vec<Vec<usize>>) -> Vec<Vec<u32>> {
    classes
        .into_iter()
        .map(|class| {
            let mut merged: Vec<u32> = class
                .into_iter()
                .flat_map(|b| blocks[b].iter().copied())
                .collect();
            merged.sort_unstable();
            merged
        })
        .collect()
}

/// Independent single-linkage route: the ultrametric distance between two
/// points is the maximum edge weight on their path through a minimum spanning
/// tree of the complete distance graph — equivalently the least `t` admitting
/// a `t`-chain between them.
pub fn sl_mst_oracle<V: Dist>(space: &FiniteMetricSpace<V>) -> Ultrametric<V> {
    let n = space.n();
    let mut matrix = vec![vec![V::zero(); n]; n];
    if n > 1 {
        // Prim's algorithm over the complete graph
        let mut in_tree = vec![false; n];
        let mut best_cost: Vec<Option<V>> = vec![None; n];
        let mut best_from = vec![0u32; n];
        let mut adjacency: Vec<Vec<(u32, V)>> = vec![Vec::new(); n];
        in_tree[0] = true;
        for j in 1..n {
            best_cost[j] = Some(space.d(0, j as u32).clone());
        }
        for _ in 1..n {
            let mut pick = None;
            for j in 0..n {
                if in_tree[j] {
                    continue;
                }
                let cost = best_cost[j].as_ref().expect("complete graph");
                pick = match pick {
                    Some((_, ref best)) if cost.cmp_total(best) != std::cmp::Ordering::Less => pick,
                    _ => Some((j, cost.clone())),
                };
            }
            let (j, cost) = pick.expect("tree is not yet spanning");
            in_tree[j] = true;
            adjacency[j].push((best_from[j], cost.clone()));
            adjacency[best_from[j] as usize].push((j as u32, cost));
            for k in 0..n {
                if in_tree[k] {
                    continue;
                }
                let d = space.d(j as u32, k as u32);
                let better = match &best_cost[k] {
                    Some(old) => d.cmp_total(old) == std::cmp::Ordering::Less,
                    None => true,
                };
                if better {
                    best_cost[k] = Some(d.clone());
                    best_from[k] = j as u32;
                }
            }
        }
        // path maxima via DFS from every source
        for src in 0..n {
            let mut stack = vec![(src as u32, V::zero())];
            let mut seen = vec![false; n];
            seen[src] = true;
            while let Some((at, path_max)) = stack.pop() {
                for (next, w) in &adjacency[at as usize] {
                    if seen[*next as usize] {
                        continue;
                    }
                    seen[*next as usize] = true;
                    let reach = path_max.max_of(w);
                    matrix[src][*next as usize] = reach.clone();
                    stack.push((*next, reach));
                }
            }
        }
    }
    let space = FiniteMetricSpace::new(space.labels().to_vec(), matrix)
        .expect("MST path maxima form a metric");
    Ultrametric::try_new(space).expect("MST path maxima satisfy the strong triangle inequality")
}
