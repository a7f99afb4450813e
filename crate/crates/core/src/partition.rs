//! Partitions of `{0..n-1}` with canonical block ordering, plus a small union-find.
//!
//! Blocks are kept sorted and listed by minimal element, so partition equality
//! is plain structural equality. That makes permutation-invariance and
//! refinement tests exact instead of up-to-reordering.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition is over {got} points, expected {expected}")]
    IndexSetMismatch { expected: usize, got: usize },
    #[error("point {0} appears in more than one block")]
    DuplicateIndex(u32),
    #[error("point index {0} out of range for ground set of size {1}")]
    IndexOutOfRange(u32, usize),
    #[error("partition contains an empty block")]
    EmptyBlock,
    #[error("point {0} is not covered by any block")]
    Uncovered(u32),
}

/// A partition of the index set `{0..n-1}` into nonempty disjoint blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<u32>>) -> Result<Self, PartitionError> {
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            block.sort_unstable();
            for &x in block.iter() {
                if (x as usize) >= n {
                    return Err(PartitionError::IndexOutOfRange(x, n));
                }
                if seen[x as usize] {
                    return Err(PartitionError::DuplicateIndex(x));
                }
                seen[x as usize] = true;
                covered += 1;
            }
        }
        if covered != n {
            let missing = seen.iter().position(|&s| !s).unwrap_or(0);
            return Err(PartitionError::Uncovered(missing as u32));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            n,
            blocks: (0..n as u32).map(|i| vec![i]).collect(),
        }
    }

    pub fn whole(n: usize) -> Self {
        assert!(n > 0, "whole partition needs a nonempty ground set");
        Partition {
            n,
            blocks: vec![(0..n as u32).collect()],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_whole(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Index of the block containing `x` (blocks are in canonical order).
    pub fn block_index_of(&self, x: u32) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&x).is_ok())
            .expect("point within ground set")
    }

    pub fn same_block(&self, x: u32, y: u32) -> bool {
        self.block_index_of(x) == self.block_index_of(y)
    }

    /// True iff every block of `self` is contained in some block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Result<bool, PartitionError> {
        if self.n != coarser.n {
            return Err(PartitionError::IndexSetMismatch {
                expected: self.n,
                got: coarser.n,
            });
        }
        let mut owner = vec![0usize; self.n];
        for (bi, block) in coarser.blocks.iter().enumerate() {
            for &x in block {
                owner[x as usize] = bi;
            }
        }
        for block in &self.blocks {
            let first = owner[block[0] as usize];
            if block[1..].iter().any(|&x| owner[x as usize] != first) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Union-find with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut x = x as u32;
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x as usize
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Equivalence classes ordered by minimal element, members ascending.
    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let len = self.parent.len();
        let mut grouped: Vec<Vec<usize>> = vec![Vec::new(); len];
        for x in 0..len {
            let root = self.find(x);
            grouped[root].push(x);
        }
        grouped.retain(|class| !class.is_empty());
        grouped.sort_by_key(|class| class[0]);
        grouped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_ordering() {
        let p = Partition::new(4, vec![vec![3, 1], vec![2, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1, 3]]);
        let q = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rejects_bad_partitions() {
        assert_eq!(
            Partition::new(3, vec![vec![0, 1], vec![1, 2]]),
            Err(PartitionError::DuplicateIndex(1))
        );
        assert_eq!(
            Partition::new(3, vec![vec![0, 1]]),
            Err(PartitionError::Uncovered(2))
        );
        assert_eq!(
            Partition::new(2, vec![vec![0, 1], vec![]]),
            Err(PartitionError::EmptyBlock)
        );
        assert_eq!(
            Partition::new(2, vec![vec![0, 5]]),
            Err(PartitionError::IndexOutOfRange(5, 2))
        );
    }

    #[test]
    fn refinement() {
        let fine = Partition::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let mid = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let cross = Partition::new(3, vec![vec![0], vec![1, 2]]).unwrap();
        assert!(fine.refines(&mid).unwrap());
        assert!(mid.refines(&mid).unwrap());
        assert!(!mid.refines(&cross).unwrap());
        assert!(mid.refines(&Partition::whole(3)).unwrap());
        let other = Partition::singletons(4);
        assert!(matches!(
            mid.refines(&other),
            Err(PartitionError::IndexSetMismatch { .. })
        ));
    }

    #[test]
    fn union_find_classes() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 3);
        uf.union(4, 3);
        assert!(uf.same(0, 4));
        assert!(!uf.same(1, 2));
        assert_eq!(uf.classes(), vec![vec![0, 3, 4], vec![1], vec![2]]);
    }
}
