//! Exact Gromov-Hausdorff distance between small finite metric spaces.
//!
//! d_GH = ½ · min over correspondences of the distortion
//! sup |d_X(x,x') − d_Y(y,y')|. An optimal correspondence can always be
//! thinned to the union of a map X→Y and a map Y→X, so the search branches
//! over those two assignment phases, pruning any partial assignment whose
//! distortion already reaches the incumbent. When the node budget runs out
//! the result degrades to a certified interval instead of a point value.

use std::cmp::Ordering;

use thiserror::Error;

use crate::metric::FiniteMetricSpace;
use crate::value::Dist;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GhError {
    #[error("correspondence leaves point {index} of {side} uncovered")]
    Coverage { side: &'static str, index: u32 },
    #[error("correspondence pair ({0},{1}) is out of range")]
    PairOutOfRange(u32, u32),
    #[error("spaces must share an identical label sequence")]
    LabelMismatch,
}

/// A relation between two point sets covering both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pairs: Vec<(u32, u32)>,
}

impl Correspondence {
    pub fn new(mut pairs: Vec<(u32, u32)>, nx: usize, ny: usize) -> Result<Self, GhError> {
        pairs.sort_unstable();
        pairs.dedup();
        for &(x, y) in &pairs {
            if x as usize >= nx || y as usize >= ny {
                return Err(GhError::PairOutOfRange(x, y));
            }
        }
        for x in 0..nx as u32 {
            if !pairs.iter().any(|&(a, _)| a == x) {
                return Err(GhError::Coverage { side: "the left space", index: x });
            }
        }
        for y in 0..ny as u32 {
            if !pairs.iter().any(|&(_, b)| b == y) {
                return Err(GhError::Coverage { side: "the right space", index: y });
            }
        }
        Ok(Correspondence { pairs })
    }

    pub fn identity(n: usize) -> Self {
        Correspondence { pairs: (0..n as u32).map(|i| (i, i)).collect() }
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

/// Max over related pairs of |d_X − d_Y| (not halved).
pub fn distortion<V: Dist>(
    r: &Correspondence,
    x: &FiniteMetricSpace<V>,
    y: &FiniteMetricSpace<V>,
) -> Result<V, GhError> {
    for &(a, b) in r.pairs() {
        if a as usize >= x.n() || b as usize >= y.n() {
            return Err(GhError::PairOutOfRange(a, b));
        }
    }
    let mut worst = V::zero();
    for (i, &(xa, ya)) in r.pairs().iter().enumerate() {
        for &(xb, yb) in &r.pairs()[i + 1..] {
            let gamma = x.d(xa, xb).abs_diff(y.d(ya, yb));
            worst = worst.max_of(&gamma);
        }
    }
    Ok(worst)
}

/// Cheap upper bound when both spaces share one label sequence: half the
/// entrywise max gap, i.e. the identity correspondence.
pub fn gh_upper_identity<V: Dist>(
    x: &FiniteMetricSpace<V>,
    y: &FiniteMetricSpace<V>,
) -> Result<V, GhError> {
    if x.labels() != y.labels() {
        return Err(GhError::LabelMismatch);
    }
    let r = Correspondence::identity(x.n());
    Ok(distortion(&r, x, y)?.halve())
}

/// Result of the exact search: a point value, or a certified interval when
/// the node budget was exhausted first.
#[derive(Clone, Debug, PartialEq)]
pub enum GhOutcome<V: Dist> {
    Exact(V),
    Bounds { lower: V, upper: V },
}

impl<V: Dist> GhOutcome<V> {
    pub fn exact_value(&self) -> Option<&V> {
        match self {
            GhOutcome::Exact(v) => Some(v),
            GhOutcome::Bounds { .. } => None,
        }
    }

    pub fn upper(&self) -> &V {
        match self {
            GhOutcome::Exact(v) => v,
            GhOutcome::Bounds { upper, .. } => upper,
        }
    }

    pub fn lower(&self) -> &V {
        match self {
            GhOutcome::Exact(v) => v,
            GhOutcome::Bounds { lower, .. } => lower,
        }
    }
}

/// Exact Gromov-Hausdorff distance by branch and bound over correspondences.
///
/// Intended for desk-sized spaces (|X|, |Y| ≲ 10). `node_budget` caps the
/// number of assignments tried before the search settles for bounds.
pub fn gh_exact<V: Dist>(
    x: &FiniteMetricSpace<V>,
    y: &FiniteMetricSpace<V>,
    node_budget: u64,
) -> GhOutcome<V> {
    // |diam X − diam Y| lower-bounds every distortion
    let diam_x = x.diameter().unwrap_or_else(V::zero);
    let diam_y = y.diameter().unwrap_or_else(V::zero);
    let lower = diam_x.abs_diff(&diam_y);

    let incumbent = initial_correspondence(x, y);
    let upper = distortion(&incumbent, x, y).expect("initial correspondence is valid");
    if upper.cmp_total(&lower) != Ordering::Greater {
        return GhOutcome::Exact(upper.halve());
    }

    let mut search = Search::new(x, y, lower.clone(), upper, node_budget);
    search.assign_x(0, V::zero());
    if search.aborted {
        GhOutcome::Bounds { lower: lower.halve(), upper: search.best.halve() }
    } else {
        GhOutcome::Exact(search.best.halve())
    }
}

fn ecc_order<V: Dist>(space: &FiniteMetricSpace<V>) -> Vec<u32> {
    let mut order: Vec<u32> = (0..space.n() as u32).collect();
    order.sort_by(|&a, &b| {
        space
            .eccentricity(b)
            .cmp_total(&space.eccentricity(a))
            .then(a.cmp(&b))
    });
    order
}

fn initial_correspondence<V: Dist>(
    x: &FiniteMetricSpace<V>,
    y: &FiniteMetricSpace<V>,
) -> Correspondence {
    if x.labels() == y.labels() {
        return Correspondence::identity(x.n());
    }
    // greedy: match eccentricity ranks proportionally
    let xs = ecc_order(x);
    let ys = ecc_order(y);
    let mut pairs = Vec::new();
    for (rank, &xi) in xs.iter().enumerate() {
        let yi = ys[rank * ys.len() / xs.len()];
        pairs.push((xi, yi));
    }
    for (rank, &yi) in ys.iter().enumerate() {
        let xi = xs[rank * xs.len() / ys.len()];
        pairs.push((xi, yi));
    }
    Correspondence::new(pairs, x.n(), y.n()).expect("greedy matching covers both sides")
}

struct Search<'a, V: Dist> {
    x: &'a FiniteMetricSpace<V>,
    y: &'a FiniteMetricSpace<V>,
    x_order: Vec<u32>,
    y_cands: Vec<Vec<u32>>,
    x_cands: Vec<Vec<u32>>,
    pairs: Vec<(u32, u32)>,
    best: V,
    lower: V,
    nodes_left: u64,
    aborted: bool,
    done: bool,
}

impl<'a, V: Dist> Search<'a, V> {
    fn new(
        x: &'a FiniteMetricSpace<V>,
        y: &'a FiniteMetricSpace<V>,
        lower: V,
        best: V,
        node_budget: u64,
    ) -> Self {
        let x_order = ecc_order(x);
        let y_eccs: Vec<V> = (0..y.n() as u32).map(|i| y.eccentricity(i)).collect();
        let x_eccs: Vec<V> = (0..x.n() as u32).map(|i| x.eccentricity(i)).collect();
        let y_cands = (0..x.n() as u32)
            .map(|xi| {
                let mut cands: Vec<u32> = (0..y.n() as u32).collect();
                cands.sort_by(|&a, &b| {
                    x_eccs[xi as usize]
                        .abs_diff(&y_eccs[a as usize])
                        .cmp_total(&x_eccs[xi as usize].abs_diff(&y_eccs[b as usize]))
                        .then(a.cmp(&b))
                });
                cands
            })
            .collect();
        let x_cands = (0..y.n() as u32)
            .map(|yi| {
                let mut cands: Vec<u32> = (0..x.n() as u32).collect();
                cands.sort_by(|&a, &b| {
                    y_eccs[yi as usize]
                        .abs_diff(&x_eccs[a as usize])
                        .cmp_total(&y_eccs[yi as usize].abs_diff(&x_eccs[b as usize]))
                        .then(a.cmp(&b))
                });
                cands
            })
            .collect();
        Search {
            x,
            y,
            x_order,
            y_cands,
            x_cands,
            pairs: Vec::new(),
            best,
            lower,
            nodes_left: node_budget,
            aborted: false,
            done: false,
        }
    }

    fn extended_distortion(&self, xi: u32, yi: u32, cur: &V) -> V {
        let mut worst = cur.clone();
        for &(xa, ya) in &self.pairs {
            let gamma = self.x.d(xi, xa).abs_diff(self.y.d(yi, ya));
            worst = worst.max_of(&gamma);
        }
        worst
    }

    fn assign_x(&mut self, k: usize, cur: V) {
        if self.aborted || self.done {
            return;
        }
        if k == self.x_order.len() {
            let covered: Vec<bool> = {
                let mut covered = vec![false; self.y.n()];
                for &(_, y) in &self.pairs {
                    covered[y as usize] = true;
                }
                covered
            };
            let uncovered: Vec<u32> = (0..self.y.n() as u32)
                .filter(|&y| !covered[y as usize])
                .collect();
            self.assign_y(&uncovered, 0, cur);
            return;
        }
        let xi = self.x_order[k];
        let cands = self.y_cands[xi as usize].clone();
        for yi in cands {
            if self.nodes_left == 0 {
                self.aborted = true;
                return;
            }
            self.nodes_left -= 1;
            let next = self.extended_distortion(xi, yi, &cur);
            if next.cmp_total(&self.best) != Ordering::Less {
                continue;
            }
            self.pairs.push((xi, yi));
            self.assign_x(k + 1, next);
            self.pairs.pop();
            if self.aborted || self.done {
                return;
            }
        }
    }

    fn assign_y(&mut self, uncovered: &[u32], k: usize, cur: V) {
        if self.aborted || self.done {
            return;
        }
        if k == uncovered.len() {
            // strictly better than the incumbent by construction
            self.best = cur;
            if self.best.cmp_total(&self.lower) != Ordering::Greater {
                self.done = true;
            }
            return;
        }
        let yi = uncovered[k];
        let cands = self.x_cands[yi as usize].clone();
        for xi in cands {
            if self.nodes_left == 0 {
                self.aborted = true;
                return;
            }
            self.nodes_left -= 1;
            let next = self.extended_distortion(xi, yi, &cur);
            if next.cmp_total(&self.best) != Ordering::Less {
                continue;
            }
            self.pairs.push((xi, yi));
            self.assign_y(uncovered, k + 1, next);
            self.pairs.pop();
            if self.aborted || self.done {
                return;
            }
        }
    }
}
