//! Dendrograms as right-continuous step functions into partitions, and the
//! duality with ultrametrics.
//!
//! A dendrogram stores only its breakpoints: strictly increasing heights
//! starting at 0, one partition per height, singletons first, the whole set
//! last, consecutive levels strictly coarsening. Evaluation at `t` picks the
//! last level with height `<= t`.

use std::cmp::Ordering;

use thiserror::Error;

use crate::metric::{FiniteMetricSpace, MetricError, Ultrametric};
use crate::partition::{Partition, UnionFind};
use crate::value::Dist;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DendrogramError {
    #[error("dendrogram needs at least one level")]
    Empty,
    #[error("heights and levels differ in length")]
    LengthMismatch,
    #[error("first height must be 0")]
    FirstHeightNotZero,
    #[error("level 0 must be the all-singletons partition")]
    NotSingletonsAtZero,
    #[error("heights must be strictly increasing (level {0})")]
    HeightsNotIncreasing(usize),
    #[error("level {0} does not coarsen its predecessor")]
    NoRefinement(usize),
    #[error("level {0} equals its predecessor (redundant breakpoint)")]
    RedundantLevel(usize),
    #[error("last level must be the one-block partition")]
    LastLevelNotWhole,
    #[error("level {0} is over the wrong ground set")]
    GroundSetMismatch(usize),
    #[error("{got} labels provided for {expected} points")]
    LabelCountMismatch { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram<V: Dist> {
    heights: Vec<V>,
    levels: Vec<Partition>,
}

impl<V: Dist> Dendrogram<V> {
    pub fn new(heights: Vec<V>, levels: Vec<Partition>) -> Result<Self, DendrogramError> {
        if levels.is_empty() {
            return Err(DendrogramError::Empty);
        }
        if heights.len() != levels.len() {
            return Err(DendrogramError::LengthMismatch);
        }
        if !heights[0].is_zero() {
            return Err(DendrogramError::FirstHeightNotZero);
        }
        let n = levels[0].n();
        if !levels[0].is_singletons() {
            return Err(DendrogramError::NotSingletonsAtZero);
        }
        for (idx, level) in levels.iter().enumerate().skip(1) {
            if level.n() != n {
                return Err(DendrogramError::GroundSetMismatch(idx));
            }
            if heights[idx - 1].cmp_total(&heights[idx]) != Ordering::Less {
                return Err(DendrogramError::HeightsNotIncreasing(idx));
            }
            if level == &levels[idx - 1] {
                return Err(DendrogramError::RedundantLevel(idx));
            }
            match levels[idx - 1].refines(level) {
                Ok(true) => {}
                _ => return Err(DendrogramError::NoRefinement(idx)),
            }
        }
        if !levels.last().unwrap().is_whole() {
            return Err(DendrogramError::LastLevelNotWhole);
        }
        Ok(Dendrogram { heights, levels })
    }

    pub fn n(&self) -> usize {
        self.levels[0].n()
    }

    pub fn heights(&self) -> &[V] {
        &self.heights
    }

    pub fn levels(&self) -> &[Partition] {
        &self.levels
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Evaluate the step function at `t >= 0`.
    pub fn eval(&self, t: &V) -> &Partition {
        let mut idx = 0;
        for (i, h) in self.heights.iter().enumerate() {
            if h.cmp_total(t) != Ordering::Greater {
                idx = i;
            } else {
                break;
            }
        }
        &self.levels[idx]
    }

    /// First height at which `x` and `y` share a block.
    pub fn merge_height(&self, x: u32, y: u32) -> &V {
        for (h, level) in self.heights.iter().zip(&self.levels) {
            if level.same_block(x, y) {
                return h;
            }
        }
        unreachable!("last level is the one-block partition")
    }
}

/// Incremental construction used by the clustering recursions: levels are
/// appended in height order and no-op levels are dropped.
pub(crate) struct DendrogramBuilder<V: Dist> {
    heights: Vec<V>,
    levels: Vec<Partition>,
}

impl<V: Dist> DendrogramBuilder<V> {
    pub fn new(n: usize) -> Self {
        DendrogramBuilder {
            heights: vec![V::zero()],
            levels: vec![Partition::singletons(n)],
        }
    }

    pub fn current(&self) -> &Partition {
        self.levels.last().unwrap()
    }

    pub fn push(&mut self, height: V, level: Partition) {
        if &level == self.current() {
            return;
        }
        self.heights.push(height);
        self.levels.push(level);
    }

    pub fn finish(self) -> Dendrogram<V> {
        Dendrogram::new(self.heights, self.levels)
            .expect("clustering recursion maintains dendrogram invariants")
    }
}

/// The ultrametric dual: `u(x, y)` is the first height at which `x` and `y`
/// share a block.
pub fn dendrogram_to_ultrametric<V: Dist>(
    dendrogram: &Dendrogram<V>,
    labels: &[String],
) -> Result<Ultrametric<V>, DendrogramError> {
    let n = dendrogram.n();
    if labels.len() != n {
        return Err(DendrogramError::LabelCountMismatch { expected: n, got: labels.len() });
    }
    let mut matrix = vec![vec![V::zero(); n]; n];
    let mut assigned = vec![false; n * n];
    for (h, level) in dendrogram.heights().iter().zip(dendrogram.levels()) {
        for block in level.blocks() {
            for (ai, &a) in block.iter().enumerate() {
                for &b in &block[ai + 1..] {
                    let slot = a as usize * n + b as usize;
                    if !assigned[slot] {
                        assigned[slot] = true;
                        matrix[a as usize][b as usize] = h.clone();
                        matrix[b as usize][a as usize] = h.clone();
                    }
                }
            }
        }
    }
    let space = FiniteMetricSpace::new(labels.to_vec(), matrix)
        .expect("dendrogram heights yield a valid metric");
    Ok(Ultrametric::try_new(space).expect("nested partitions yield an ultrametric"))
}

/// Inverse duality: breakpoints are the distinct values of `u`, the level at
/// height `t` partitions the points into closed `u`-balls of radius `t`.
pub fn ultrametric_to_dendrogram<V: Dist>(u: &Ultrametric<V>) -> Dendrogram<V> {
    let n = u.n();
    let mut heights = vec![V::zero()];
    let mut levels = vec![Partition::singletons(n)];
    for value in u.space().distinct_positive_values() {
        let mut uf = UnionFind::new(n);
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if u.d(i, j).cmp_total(&value) != Ordering::Greater {
                    uf.union(i as usize, j as usize);
                }
            }
        }
        let blocks = uf
            .classes()
            .into_iter()
            .map(|class| class.into_iter().map(|x| x as u32).collect())
            .collect();
        heights.push(value);
        levels.push(Partition::new(n, blocks).expect("union-find classes partition the points"));
    }
    Dendrogram::new(heights, levels).expect("ultrametric ball structure is a dendrogram")
}

/// Convenience: check that `maybe_ultrametric` really is one, then convert.
pub fn space_to_dendrogram<V: Dist>(
    space: FiniteMetricSpace<V>,
) -> Result<Dendrogram<V>, MetricError> {
    let u = Ultrametric::try_new(space)?;
    Ok(ultrametric_to_dendrogram(&u))
}
