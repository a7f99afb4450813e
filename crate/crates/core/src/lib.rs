//! Hierarchical clustering over finite metric spaces.
//!
//! Three classical linkage methods (single, complete, average) built on the
//! multi-merge recursion, and two unchaining variants — SL(α) and SL*(α) —
//! that gate merges on the clique structure of threshold graphs so that thin
//! chains between dense groups stop collapsing them. Ships with an exact
//! Gromov-Hausdorff engine for small spaces and a property lab that checks
//! the methods' axioms on generated instances and replays counterexamples.
//!
//! The main entry points:
//!
//! * [`FiniteMetricSpace`] — validated input; [`Ultrametric`] and
//!   [`Dendrogram`] — the two dual output forms.
//! * [`standard_linkage_dendrogram`] with a [`LinkageKind`], or
//!   [`sl_alpha_dendrogram`] / [`sl_star_alpha_dendrogram`] with an
//!   [`Alpha`].
//! * [`gh_exact`] for Gromov-Hausdorff distances, [`proplab`] for the
//!   property checks, [`io`] for file formats.

pub mod alpha;
pub mod dendrogram;
pub mod gh;
pub mod instances;
pub mod io;
pub mod linkage;
pub mod metric;
pub mod partition;
pub mod proplab;
pub mod rips;
pub mod unchaining;
pub mod value;

pub use alpha::{Alpha, AlphaError};
pub use dendrogram::{
    dendrogram_to_ultrametric, ultrametric_to_dendrogram, Dendrogram, DendrogramError,
};
pub use gh::{distortion, gh_exact, gh_upper_identity, Correspondence, GhError, GhOutcome};
pub use linkage::{linkage_value, sl_mst_oracle, standard_linkage_dendrogram, LinkageKind};
pub use metric::{
    default_labels, shortest_path_metric, FiniteMetricSpace, MetricError, Ultrametric,
};
pub use partition::{Partition, PartitionError, UnionFind};
pub use rips::{condition_ii, max_crossing_clique_dim, rips_dimension, RipsError, ThresholdGraph};
pub use unchaining::{
    big_small_split, block_graph, sl_alpha_dendrogram, sl_star_alpha_dendrogram,
    star_merge_relation, BlockEdge, BlockGraph, ComponentSplit,
};
pub use value::Dist;
