//! The unchaining single-linkage variants SL(α) and SL*(α).
//!
//! Both walk the grid of distinct distance values. At each grid value t the
//! current blocks become vertices of a graph whose edges require two
//! conditions: (i) some cross pair at distance <= t, and (ii) a crossing
//! simplex of the scale-t Rips complex whose dimension, scaled by α, reaches
//! the smaller block's complex dimension. SL(α) merges whole connected
//! components. SL*(α) refines that: within a component, blocks are split into
//! big and small by α · size against the component maximum, big blocks merge
//! along connected pieces of the big-block subgraph, and a connected group of
//! small blocks joins a piece only when no big block outside it is adjacent
//! to the group — a small group bridging two big pieces joins neither.
//!
//! One quotient pass per grid value: blocks formed at t are reconsidered only
//! at the next value. At the largest distance every pair of blocks passes
//! both conditions (the threshold graph is complete), so the recursion ends
//! in the one-block partition within the grid; the extension loop below is a
//! guard, not an expected path.

use std::collections::BTreeSet;

use crate::alpha::Alpha;
use crate::dendrogram::{Dendrogram, DendrogramBuilder};
use crate::metric::FiniteMetricSpace;
use crate::partition::{Partition, UnionFind};
use crate::rips::{condition_ii_memo, RipsMemo};
use crate::value::Dist;

/// Blocks of the current level as graph vertices, with both merge conditions
/// recorded per pair. An edge is present iff both conditions hold. Pairs
/// failing condition (i) are not stored; condition (ii) implies (i) because a
/// crossing simplex contains a crossing edge.
#[derive(Clone, Debug)]
pub struct BlockGraph<V: Dist> {
    pub partition: Partition,
    pub scale: V,
    pub alpha: Alpha,
    pub edges: Vec<BlockEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockEdge {
    pub a: usize,
    pub b: usize,
    pub condition_i: bool,
    pub condition_ii: bool,
}

impl<V: Dist> BlockGraph<V> {
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|e| {
            ((e.a == a && e.b == b) || (e.a == b && e.b == a)) && e.condition_i && e.condition_ii
        })
    }

    /// Connected components of the block graph, canonically ordered.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.partition.num_blocks());
        for e in &self.edges {
            if e.condition_i && e.condition_ii {
                uf.union(e.a, e.b);
            }
        }
        uf.classes()
    }
}

/// Build the block graph at scale `t` over the blocks of `current`.
pub fn block_graph<V: Dist>(
    space: &FiniteMetricSpace<V>,
    current: &Partition,
    t: &V,
    alpha: &Alpha,
) -> BlockGraph<V> {
    let mut memo = RipsMemo::default();
    block_graph_memo(space, current, t, 0, alpha, &mut memo)
}

fn block_graph_memo<V: Dist>(
    space: &FiniteMetricSpace<V>,
    current: &Partition,
    t: &V,
    grid_index: usize,
    alpha: &Alpha,
    memo: &mut RipsMemo,
) -> BlockGraph<V> {
    let blocks = current.blocks();
    let mut edges = Vec::new();
    for a in 0..blocks.len() {
        for b in (a + 1)..blocks.len() {
            if !min_cross_within(space, &blocks[a], &blocks[b], t) {
                continue;
            }
            let cond_ii = condition_ii_memo(space, &blocks[a], &blocks[b], t, grid_index, alpha, memo)
                .expect("partition blocks are nonempty and disjoint");
            edges.push(BlockEdge { a, b, condition_i: true, condition_ii: cond_ii });
        }
    }
    BlockGraph {
        partition: current.clone(),
        scale: t.clone(),
        alpha: alpha.clone(),
        edges,
    }
}

fn min_cross_within<V: Dist>(space: &FiniteMetricSpace<V>, a: &[u32], b: &[u32], t: &V) -> bool {
    a.iter().any(|&x| {
        b.iter()
            .any(|&y| space.d(x, y).cmp_total(t) != std::cmp::Ordering::Greater)
    })
}

/// One component of a block graph classified by the big-block rule
/// α · #B ≥ max block size, with the connected pieces of the induced big and
/// small subgraphs. The maximal block is always big, so `big` is nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSplit {
    pub component: Vec<usize>,
    pub big: Vec<usize>,
    pub small: Vec<usize>,
    pub h_components: Vec<Vec<usize>>,
    pub s_components: Vec<Vec<usize>>,
}

pub fn big_small_split<V: Dist>(graph: &BlockGraph<V>, component: &[usize]) -> ComponentSplit {
    let blocks = graph.partition.blocks();
    let max_size = component
        .iter()
        .map(|&b| blocks[b].len())
        .max()
        .expect("component is nonempty");
    let mut big = Vec::new();
    let mut small = Vec::new();
    for &b in component {
        if graph.alpha.classifies_big(blocks[b].len(), max_size) {
            big.push(b);
        } else {
            small.push(b);
        }
    }
    let h_components = induced_components(graph, &big);
    let s_components = induced_components(graph, &small);
    ComponentSplit { component: component.to_vec(), big, small, h_components, s_components }
}

fn induced_components<V: Dist>(graph: &BlockGraph<V>, members: &[usize]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(members.len());
    for (ai, &a) in members.iter().enumerate() {
        for (bi, &b) in members.iter().enumerate().skip(ai + 1) {
            if graph.has_edge(a, b) {
                uf.union(ai, bi);
            }
        }
    }
    uf.classes()
        .into_iter()
        .map(|class| class.into_iter().map(|i| members[i]).collect())
        .collect()
}

/// The SL*(α) merge relation on one component, as the smallest equivalence
/// relation containing: big blocks in the same piece of the big subgraph, and
/// (big, small) pairs where the small block's connected small-group has no
/// adjacent big block outside the piece. Returned classes never span two
/// pieces of the big subgraph: a small group adjacent to several pieces joins
/// none of them, and one adjacent to exactly one joins that piece.
pub fn star_merge_relation<V: Dist>(
    graph: &BlockGraph<V>,
    split: &ComponentSplit,
) -> Vec<Vec<usize>> {
    let slot_of = |b: usize| -> usize {
        split
            .component
            .iter()
            .position(|&x| x == b)
            .expect("block belongs to the component")
    };
    let mut uf = UnionFind::new(split.component.len());
    for piece in &split.h_components {
        for pair in piece.windows(2) {
            uf.union(slot_of(pair[0]), slot_of(pair[1]));
        }
    }
    for group in &split.s_components {
        let adjacent_big: BTreeSet<usize> = split
            .big
            .iter()
            .copied()
            .filter(|&b| group.iter().any(|&s| graph.has_edge(b, s)))
            .collect();
        // A connected component of the whole graph cannot contain a maximal
        // small group with no big neighbor at all.
        debug_assert!(
            !adjacent_big.is_empty(),
            "small group without a big neighbor in a connected component"
        );
        for piece in &split.h_components {
            if adjacent_big.iter().all(|b| piece.contains(b)) {
                for &s in group {
                    uf.union(slot_of(piece[0]), slot_of(s));
                }
            }
        }
    }
    uf.classes()
        .into_iter()
        .map(|class| class.into_iter().map(|slot| split.component[slot]).collect())
        .collect()
}

/// SL(α): quotient by connected components of the block graph.
pub fn sl_alpha_dendrogram<V: Dist>(
    space: &FiniteMetricSpace<V>,
    alpha: &Alpha,
) -> Dendrogram<V> {
    unchaining_run(space, alpha, false)
}

/// SL*(α): quotient by the big/small merge relation within each component.
pub fn sl_star_alpha_dendrogram<V: Dist>(
    space: &FiniteMetricSpace<V>,
    alpha: &Alpha,
) -> Dendrogram<V> {
    unchaining_run(space, alpha, true)
}

fn unchaining_run<V: Dist>(
    space: &FiniteMetricSpace<V>,
    alpha: &Alpha,
    star: bool,
) -> Dendrogram<V> {
    let n = space.n();
    let mut builder = DendrogramBuilder::new(n);
    if n <= 1 {
        return builder.finish();
    }
    let grid = space.distinct_positive_values();
    let diameter = grid.last().expect("multi-point space has distances").clone();
    let mut memo = RipsMemo::default();
    let mut current = Partition::singletons(n);
    let mut last_scale = V::zero();
    let mut queue = grid.into_iter();
    let mut extensions = 0usize;
    let mut grid_index = 0usize;
    while !current.is_whole() {
        let t = match queue.next() {
            Some(t) => t,
            None => {
                // Unreachable for valid metrics: at the diameter the block
                // graph is complete and the big subgraph connected, so the
                // quotient above collapses everything. Guarded regardless.
                extensions += 1;
                assert!(
                    extensions < n,
                    "unchaining recursion failed to terminate within {} synthetic grid extensions",
                    n - 1
                );
                last_scale.add(&diameter)
            }
        };
        grid_index += 1;
        let graph = block_graph_memo(space, &current, &t, grid_index, alpha, &mut memo);
        let classes = if star {
            let mut merged = Vec::new();
            for component in graph.components() {
                let split = big_small_split(&graph, &component);
                merged.extend(star_merge_relation(&graph, &split));
            }
            merged
        } else {
            graph.components()
        };
        let next = quotient(&current, &classes);
        builder.push(t.clone(), next.clone());
        current = next;
        last_scale = t;
    }
    builder.finish()
}

fn quotient(current: &Partition, classes: &[Vec<usize>]) -> Partition {
    let blocks = current.blocks();
    let merged: Vec<Vec<u32>> = classes
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
    Partition::new(current.n(), merged).expect("merge classes partition the blocks")
}
