//! Finite metric spaces with exhaustively validated distance matrices.
//!
//! Every space admitted here satisfies the three metric axioms (zero diagonal
//! with positive off-diagonal entries, symmetry, triangle inequality), checked
//! by full scans at construction. Duplicate points (zero distance between
//! distinct labels) are rejected rather than pre-merged, so the separation
//! `sep(X, d)` of a validated space is always positive.

use thiserror::Error;

use crate::value::Dist;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("metric space needs at least one point")]
    Empty,
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("row {row} has {got} entries, expected {expected}")]
    ShapeMismatch { row: usize, got: usize, expected: usize },
    #[error("matrix has {got} rows, expected {expected}")]
    RowCountMismatch { got: usize, expected: usize },
    #[error("entry ({i},{j}) is not a finite nonnegative distance")]
    InvalidEntry { i: usize, j: usize },
    #[error("diagonal entry ({i},{i}) must be zero")]
    NonzeroDiagonal { i: usize },
    #[error("matrix is asymmetric at ({i},{j})")]
    Asymmetry { i: usize, j: usize },
    #[error("zero distance between distinct points {i} and {j}")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("triangle inequality violated: d({i},{j}) > d({i},{via}) + d({via},{j})")]
    TriangleViolation { i: usize, via: usize, j: usize },
    #[error("strong triangle inequality violated: d({i},{j}) > max(d({i},{via}), d({via},{j}))")]
    NotUltrametric { i: usize, via: usize, j: usize },
    #[error("edge endpoint {0} out of range for {1} vertices")]
    EdgeOutOfRange(u32, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),
    #[error("edge ({i},{j}) has a nonpositive or invalid weight")]
    BadEdgeWeight { i: usize, j: usize },
    #[error("graph is disconnected: no path between vertices {i} and {j}")]
    DisconnectedGraph { i: usize, j: usize },
}

/// A labeled finite metric space with a validated distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace<V: Dist> {
    labels: Vec<String>,
    n: usize,
    dist: Vec<V>,
}

impl<V: Dist> FiniteMetricSpace<V> {
    /// Validate a raw square matrix against all metric axioms (O(n^3) scan).
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<V>>) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(MetricError::DuplicateLabel(label.clone()));
            }
        }
        if matrix.len() != n {
            return Err(MetricError::RowCountMismatch { got: matrix.len(), expected: n });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::ShapeMismatch { row: i, got: row.len(), expected: n });
            }
        }
        let zero = V::zero();
        for (i, row) in matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_valid() || v.cmp_total(&zero) == std::cmp::Ordering::Less {
                    return Err(MetricError::InvalidEntry { i, j });
                }
            }
        }
        for (i, row) in matrix.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(MetricError::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(MetricError::Asymmetry { i, j });
                }
                if matrix[i][j].is_zero() {
                    return Err(MetricError::ZeroOffDiagonal { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let detour = matrix[i][k].add(&matrix[k][j]);
                    if matrix[i][j].cmp_total(&detour) == std::cmp::Ordering::Greater {
                        return Err(MetricError::TriangleViolation { i, via: k, j });
                    }
                }
            }
        }
        let dist = matrix.into_iter().flatten().collect();
        Ok(FiniteMetricSpace { labels, n, dist })
    }

    /// Construction for values that are metrics by derivation (restrictions,
    /// relabelings, shortest-path closures already validated by the caller).
    pub(crate) fn new_unchecked(labels: Vec<String>, n: usize, dist: Vec<V>) -> Self {
        debug_assert_eq!(labels.len(), n);
        debug_assert_eq!(dist.len(), n * n);
        FiniteMetricSpace { labels, n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: u32) -> &str {
        &self.labels[i as usize]
    }

    pub fn d(&self, i: u32, j: u32) -> &V {
        &self.dist[i as usize * self.n + j as usize]
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels.iter().position(|l| l == label).map(|i| i as u32)
    }

    pub fn to_matrix(&self) -> Vec<Vec<V>> {
        (0..self.n)
            .map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Minimal positive distance; `None` for a single point.
    pub fn sep(&self) -> Option<V> {
        let mut best: Option<&V> = None;
        for i in 0..self.n as u32 {
            for j in (i + 1)..self.n as u32 {
                let v = self.d(i, j);
                best = Some(match best {
                    Some(b) if b.cmp_total(v) != std::cmp::Ordering::Greater => b,
                    _ => v,
                });
            }
        }
        best.cloned()
    }

    pub fn diameter(&self) -> Option<V> {
        let mut best: Option<&V> = None;
        for i in 0..self.n as u32 {
            for j in (i + 1)..self.n as u32 {
                let v = self.d(i, j);
                best = Some(match best {
                    Some(b) if b.cmp_total(v) != std::cmp::Ordering::Less => b,
                    _ => v,
                });
            }
        }
        best.cloned()
    }

    /// Distinct positive distances in ascending order: the merge grid.
    pub fn distinct_positive_values(&self) -> Vec<V> {
        let mut values: Vec<V> = Vec::new();
        for i in 0..self.n as u32 {
            for j in (i + 1)..self.n as u32 {
                values.push(self.d(i, j).clone());
            }
        }
        values.sort_by(|a, b| a.cmp_total(b));
        values.dedup();
        values
    }

    /// Max distance from `i` to any other point.
    pub fn eccentricity(&self, i: u32) -> V {
        let mut best = V::zero();
        for j in 0..self.n as u32 {
            best = best.max_of(self.d(i, j));
        }
        best
    }

    pub fn is_ultrametric(&self) -> bool {
        self.check_ultrametric().is_ok()
    }

    fn check_ultrametric(&self) -> Result<(), MetricError> {
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                for k in 0..self.n {
                    if k == i || k == j {
                        continue;
                    }
                    let bound = self.d(i as u32, k as u32).max_of(self.d(k as u32, j as u32));
                    if self.d(i as u32, j as u32).cmp_total(&bound) == std::cmp::Ordering::Greater {
                        return Err(MetricError::NotUltrametric { i, via: k, j });
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabeled copy: point `i` of the result is point `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[u32]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let labels = perm.iter().map(|&p| self.labels[p as usize].clone()).collect();
        let mut dist = Vec::with_capacity(self.n * self.n);
        for &i in perm {
            for &j in perm {
                dist.push(self.d(i, j).clone());
            }
        }
        FiniteMetricSpace::new_unchecked(labels, self.n, dist)
    }

    /// Subspace on the given (distinct) indices, in the given order.
    pub fn restricted(&self, subset: &[u32]) -> Self {
        assert!(!subset.is_empty(), "subspace needs at least one point");
        let labels = subset.iter().map(|&i| self.labels[i as usize].clone()).collect();
        let mut dist = Vec::with_capacity(subset.len() * subset.len());
        for &i in subset {
            for &j in subset {
                dist.push(self.d(i, j).clone());
            }
        }
        FiniteMetricSpace::new_unchecked(labels, subset.len(), dist)
    }

    /// Quantize all distances to `places` decimals and re-validate.
    pub fn snapped(&self, places: u32) -> Result<Self, MetricError> {
        let matrix = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.d(i as u32, j as u32).round_to_decimals(places))
                    .collect()
            })
            .collect();
        FiniteMetricSpace::new(self.labels.clone(), matrix)
    }
}

/// All-pairs shortest-path closure of a connected, positively weighted graph.
///
/// Multi-edges keep the smallest weight. The result is revalidated as a
/// metric, so any bug surfaces as a `MetricError` instead of a bad space.
pub fn shortest_path_metric<V: Dist>(
    labels: Vec<String>,
    edges: &[(u32, u32, V)],
) -> Result<FiniteMetricSpace<V>, MetricError> {
    let n = labels.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    let mut d: Vec<Option<V>> = vec![None; n * n];
    for i in 0..n {
        d[i * n + i] = Some(V::zero());
    }
    for (u, v, w) in edges {
        if *u as usize >= n {
            return Err(MetricError::EdgeOutOfRange(*u, n));
        }
        if *v as usize >= n {
            return Err(MetricError::EdgeOutOfRange(*v, n));
        }
        if u == v {
            return Err(MetricError::SelfLoop(*u));
        }
        if !w.is_valid() || w.cmp_total(&V::zero()) != std::cmp::Ordering::Greater {
            return Err(MetricError::BadEdgeWeight { i: *u as usize, j: *v as usize });
        }
        let (a, b) = (*u as usize, *v as usize);
        let better = match &d[a * n + b] {
            Some(old) => w.cmp_total(old) == std::cmp::Ordering::Less,
            None => true,
        };
        if better {
            d[a * n + b] = Some(w.clone());
            d[b * n + a] = Some(w.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i * n + k].clone() else { continue };
            for j in 0..n {
                let Some(dkj) = &d[k * n + j] else { continue };
                let cand = dik.add(dkj);
                let better = match &d[i * n + j] {
                    Some(old) => cand.cmp_total(old) == std::cmp::Ordering::Less,
                    None => true,
                };
                if better {
                    d[i * n + j] = Some(cand);
                }
            }
        }
    }
    let mut matrix = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            match &d[i * n + j] {
                Some(v) => row.push(v.clone()),
                None => return Err(MetricError::DisconnectedGraph { i, j }),
            }
        }
        matrix.push(row);
    }
    FiniteMetricSpace::new(labels, matrix)
}

/// A finite metric space satisfying the strong triangle inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct Ultrametric<V: Dist> {
    space: FiniteMetricSpace<V>,
}

impl<V: Dist> Ultrametric<V> {
    pub fn try_new(space: FiniteMetricSpace<V>) -> Result<Self, MetricError> {
        space.check_ultrametric()?;
        Ok(Ultrametric { space })
    }

    pub fn space(&self) -> &FiniteMetricSpace<V> {
        &self.space
    }

    pub fn into_space(self) -> FiniteMetricSpace<V> {
        self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn d(&self, i: u32, j: u32) -> &V {
        self.space.d(i, j)
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}
