//! Level-set cluster trees for piecewise-constant densities.
//!
//! A density is modeled as a finite complex of disjoint constant-level
//! regions with two adjacency relations: *touch* (closures of the union
//! connected) and *neighbor* (interior of the union connected). Sweeping the
//! levels top-down yields dendrograms: the touch-graph sweep produces the
//! level-set tree (upper-level-set components), while the neighbor-graph
//! sweep produces the finest tree whose clusters have connected interior,
//! respect whole regions, and are strictly denser than everything adjacent
//! outside. The two trees coincide exactly when every touching pair of
//! regions is also neighboring, and can differ otherwise.
//!
//! On top of the trees, the crate computes merge heights and the merge
//! distortion distance (with its known degeneracies preserved, not hidden),
//! checks the three cluster axioms directly against a brute-force
//! enumerator, partitions space with a shifted grid whose cells only meet
//! along facets, and discretizes analytic densities onto that grid with a
//! certified sup-norm error, which makes the convergence of the discretized
//! trees observable.
//!
//! ```
//! use clustertree::{ratio, sweep_tree, Adjacency, RegionComplex};
//!
//! // Three regions: 1 and 2 touch but only through a pinch point, so they
//! // are not neighbors; both neighbor the shallow region 3.
//! let complex = RegionComplex::from_abstract(
//!     vec![(1, ratio(3, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
//!     &[(1, 2), (1, 3), (2, 3)],
//!     &[(1, 3), (2, 3)],
//! )?;
//!
//! let level_set_tree = sweep_tree(&complex, Adjacency::Touch)?;
//! let axiom_tree = clustertree::axiom_tree(&complex)?;
//! // The level-set tree chains {1} ⊂ {1,2} ⊂ {1,2,3}; the axiom tree keeps
//! // {1} and {2} separate until all three merge.
//! assert_ne!(level_set_tree.cluster_set(), axiom_tree.cluster_set());
//! # Ok::<(), clustertree::Error>(())
//! ```

#![forbid(unsafe_code)]

mod error;
pub mod rational;

pub mod axioms;
pub mod cli;
pub mod density;
pub mod fixtures;
pub mod grid;
pub mod io;
pub mod metric;
pub mod regions;
pub mod tree;

pub use axioms::{
    check_a1, check_a2, check_a2_cells, check_a3, check_a3_report, enumerate_axiom_clusters,
    is_cluster_tree, is_finer, A2Report, A3Report, ClusterSet,
};
pub use density::{
    convergence_experiment, discretize, discretize_unchecked, split_fixture, sup_norm_sampled,
    sup_on_cell, CellSup, ConvergenceReport, ConvergenceRow, DensitySpec, DiscretizeOutput,
    MixtureFamily, SplitReport,
};
pub use error::{Error, Result};
pub use grid::{is_lattice_anchor, CellBox, CellId, Contact, ShiftedGrid};
pub use metric::{
    merge_distortion, merge_distortion_forests, merge_distortion_points, merge_height,
    merge_height_maximin, sup_norm_distance, Distortion, DistortionMode, MergeHeightTable,
    MergeIndex,
};
pub use rational::{parse_rational, ratio, rational_from_f64, rational_to_f64, Rational};
pub use regions::{Adjacency, ClassReport, ClassWitness, Region, RegionComplex, RegionId};
pub use tree::{axiom_tree, sweep_forest, sweep_tree, Dendrogram, Forest, TreeNode};
