//! Threshold graphs, clique dimension, and the crossing-simplex merge gate.
//!
//! The simplices of the Rips complex at scale `t` are exactly the cliques of
//! the graph joining points at distance `<= t` (closed threshold), so complex
//! dimension reduces to maximum clique size minus one. Clique search is exact
//! branch and bound over bitset adjacency; scale is desk-sized blocks, not
//! large graphs.

use std::collections::HashMap;

use thiserror::Error;

use crate::alpha::Alpha;
use crate::metric::FiniteMetricSpace;
use crate::value::Dist;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RipsError {
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("blocks overlap at point {0}")]
    OverlappingBlocks(u32),
    #[error("threshold graph supports at most 128 vertices, got {0}")]
    TooManyVertices(usize),
}

/// Graph on a vertex subset with edges exactly where `d <= t`.
#[derive(Clone, Debug)]
pub struct ThresholdGraph {
    m: usize,
    adj: Vec<u128>,
}

impl ThresholdGraph {
    pub fn from_subset<V: Dist>(
        space: &FiniteMetricSpace<V>,
        subset: &[u32],
        t: &V,
    ) -> Result<Self, RipsError> {
        if subset.is_empty() {
            return Err(RipsError::EmptySubset);
        }
        if subset.len() > 128 {
            return Err(RipsError::TooManyVertices(subset.len()));
        }
        let m = subset.len();
        let mut adj = vec![0u128; m];
        for a in 0..m {
            for b in (a + 1)..m {
                let within = space
                    .d(subset[a], subset[b])
                    .cmp_total(t)
                    != std::cmp::Ordering::Greater;
                if within {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
        }
        Ok(ThresholdGraph { m, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] & (1 << b) != 0
    }

    pub fn max_clique_size(&self) -> usize {
        let mut best = 0;
        let all = full_mask(self.m);
        expand(&self.adj, 0, all, &mut best, usize::MAX);
        best
    }
}

fn full_mask(m: usize) -> u128 {
    if m == 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    }
}

/// Carraghan-Pardalos style branch and bound; returns true once `target` is
/// reached so gate checks can stop early. Pass `usize::MAX` for a full search.
fn expand(adj: &[u128], size: usize, mut cand: u128, best: &mut usize, target: usize) -> bool {
    if size > *best {
        *best = size;
        if *best >= target {
            return true;
        }
    }
    while cand != 0 {
        if size + cand.count_ones() as usize <= *best {
            return false;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if expand(adj, size + 1, cand & adj[v], best, target) {
            return true;
        }
    }
    false
}

/// Dimension of the Rips complex of `subset` at scale `t`: max clique size − 1.
pub fn rips_dimension<V: Dist>(
    space: &FiniteMetricSpace<V>,
    subset: &[u32],
    t: &V,
) -> Result<usize, RipsError> {
    let graph = ThresholdGraph::from_subset(space, subset, t)?;
    Ok(graph.max_clique_size() - 1)
}

fn check_disjoint(bj: &[u32], bk: &[u32]) -> Result<(), RipsError> {
    if bj.is_empty() || bk.is_empty() {
        return Err(RipsError::EmptySubset);
    }
    for &x in bj {
        if bk.contains(&x) {
            return Err(RipsError::OverlappingBlocks(x));
        }
    }
    Ok(())
}

struct CrossingSearch {
    graph: ThresholdGraph,
    mask_j: u128,
    mask_k: u128,
}

impl CrossingSearch {
    fn new<V: Dist>(
        space: &FiniteMetricSpace<V>,
        bj: &[u32],
        bk: &[u32],
        t: &V,
    ) -> Result<Self, RipsError> {
        check_disjoint(bj, bk)?;
        let union: Vec<u32> = bj.iter().chain(bk.iter()).copied().collect();
        let graph = ThresholdGraph::from_subset(space, &union, t)?;
        let mask_j = full_mask(bj.len());
        let mask_k = full_mask(union.len()) & !mask_j;
        Ok(CrossingSearch { graph, mask_j, mask_k })
    }

    /// Maximum clique size among cliques meeting both sides; 0 when no
    /// crossing edge exists. Every crossing clique contains a crossing edge,
    /// so it suffices to grow cliques from common neighborhoods of those.
    fn max_crossing_size(&self, target: usize) -> usize {
        let mut best = 0;
        'outer: for a in 0..self.graph.m {
            if self.mask_j & (1 << a) == 0 {
                continue;
            }
            let mut cross = self.graph.adj[a] & self.mask_k;
            while cross != 0 {
                let b = cross.trailing_zeros() as usize;
                cross &= cross - 1;
                if best < 2 {
                    best = 2;
                    if best >= target {
                        break 'outer;
                    }
                }
                let common = self.graph.adj[a] & self.graph.adj[b];
                if expand(&self.graph.adj, 2, common, &mut best, target) {
                    break 'outer;
                }
            }
        }
        best
    }
}

/// Largest dimension of a simplex at scale `t` meeting both blocks, or `None`
/// when no crossing edge exists.
pub fn max_crossing_clique_dim<V: Dist>(
    space: &FiniteMetricSpace<V>,
    bj: &[u32],
    bk: &[u32],
    t: &V,
) -> Result<Option<usize>, RipsError> {
    let search = CrossingSearch::new(space, bj, bk, t)?;
    let size = search.max_crossing_size(usize::MAX);
    Ok(if size == 0 { None } else { Some(size - 1) })
}

/// The merge gate between two blocks at scale `t`: some crossing simplex Δ
/// must satisfy α · dim(Δ) ≥ min(dim of either block's complex).
///
/// The search stops at the first crossing clique of the required size rather
/// than computing the exact maximum.
pub fn condition_ii<V: Dist>(
    space: &FiniteMetricSpace<V>,
    bj: &[u32],
    bk: &[u32],
    t: &V,
    alpha: &Alpha,
) -> Result<bool, RipsError> {
    let mut memo = RipsMemo::default();
    condition_ii_memo(space, bj, bk, t, 0, alpha, &mut memo)
}

/// Memoized block-complex dimensions for one dendrogram run, keyed by frozen
/// block and grid position. Blocks persist across grid values, so a level's
/// many pair tests share each block's dimension.
#[derive(Default)]
pub(crate) struct RipsMemo {
    dims: HashMap<(Vec<u32>, usize), usize>,
}

impl RipsMemo {
    pub(crate) fn dimension<V: Dist>(
        &mut self,
        space: &FiniteMetricSpace<V>,
        block: &[u32],
        t: &V,
        grid_index: usize,
    ) -> Result<usize, RipsError> {
        let key = (block.to_vec(), grid_index);
        if let Some(&dim) = self.dims.get(&key) {
            return Ok(dim);
        }
        let dim = rips_dimension(space, block, t)?;
        self.dims.insert(key, dim);
        Ok(dim)
    }
}

pub(crate) fn condition_ii_memo<V: Dist>(
    space: &FiniteMetricSpace<V>,
    bj: &[u32],
    bk: &[u32],
    t: &V,
    grid_index: usize,
    alpha: &Alpha,
    memo: &mut RipsMemo,
) -> Result<bool, RipsError> {
    let search = CrossingSearch::new(space, bj, bk, t)?;
    if search.max_crossing_size(2) < 2 {
        // no crossing edge, hence no crossing simplex at all
        return Ok(false);
    }
    let dim_j = memo.dimension(space, bj, t, grid_index)?;
    let dim_k = memo.dimension(space, bk, t, grid_index)?;
    let min_dim = dim_j.min(dim_k);
    if min_dim == 0 {
        return Ok(true);
    }
    let required = alpha.required_crossing_dim(min_dim).max(1);
    Ok(search.max_crossing_size(required + 1) >= required + 1)
}
