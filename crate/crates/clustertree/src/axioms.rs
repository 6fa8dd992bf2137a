//! Direct decision procedures for the three cluster axioms, and a
//! brute-force enumerator of every axiom cluster.
//!
//! The enumerator is deliberately independent of the sweep in [`crate::tree`]:
//! it scans all nonempty region subsets and keeps those that are
//! neighbor-connected (axiom 1) and strictly denser than every adjacent
//! outside region (axiom 3); being a union of whole regions (axiom 2) is
//! automatic for id-set clusters. It is the oracle the sweep is checked
//! against.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grid::CellId;
use crate::rational::Rational;
use crate::regions::{Adjacency, RegionComplex, RegionId};

/// Subset enumeration cap: 2^20 subsets is where desk-scale stops.
pub const ENUMERATION_CAP: usize = 20;

/// A candidate collection of clusters over one complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSet {
    pub clusters: BTreeSet<BTreeSet<RegionId>>,
}

impl ClusterSet {
    pub fn new(clusters: impl IntoIterator<Item = BTreeSet<RegionId>>) -> Self {
        ClusterSet {
            clusters: clusters.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }
}

fn check_ids(cluster: &BTreeSet<RegionId>, complex: &RegionComplex) -> Result<()> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    for &id in cluster {
        if !complex.contains_region(id) {
            return Err(Error::UnknownRegion(id));
        }
    }
    Ok(())
}

/// Axiom 1: the cluster induces a connected subgraph of the neighbor graph,
/// i.e. any two member regions are linked by a neighbor chain inside the
/// cluster.
pub fn check_a1(cluster: &BTreeSet<RegionId>, complex: &RegionComplex) -> Result<bool> {
    check_ids(cluster, complex)?;
    let start = *cluster.iter().next().expect("nonempty");
    let mut seen: BTreeSet<RegionId> = BTreeSet::new();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for u in complex.adjacent_to(v, Adjacency::Neighbor)? {
            if cluster.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    Ok(seen.len() == cluster.len())
}

/// Outcome of the whole-regions check for a geometric cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct A2Report {
    pub holds: bool,
    /// A region the cluster meets but does not cover, when one exists.
    pub split_region: Option<RegionId>,
}

/// Axiom 2 for id-set clusters: always satisfied, since the representation
/// is a union of whole regions.
pub fn check_a2(cluster: &BTreeSet<RegionId>, complex: &RegionComplex) -> Result<bool> {
    check_ids(cluster, complex)?;
    Ok(true)
}

/// Axiom 2 for a cluster supplied as grid cells: the cluster must cover
/// every region it meets. Cells outside the support carry no density and do
/// not affect the verdict.
pub fn check_a2_cells(cells: &[CellId], complex: &RegionComplex) -> Result<A2Report> {
    if !complex.has_geometry() {
        return Err(Error::MissingGeometry);
    }
    let have: BTreeSet<&CellId> = cells.iter().collect();
    let mut met: BTreeSet<RegionId> = BTreeSet::new();
    for region in complex.regions() {
        if region.cells.iter().any(|c| have.contains(c)) {
            met.insert(region.id);
        }
    }
    for &id in &met {
        let region = complex.region(id)?;
        if !region.cells.iter().all(|c| have.contains(c)) {
            return Ok(A2Report {
                holds: false,
                split_region: Some(id),
            });
        }
    }
    Ok(A2Report {
        holds: true,
        split_region: None,
    })
}

/// Details behind an axiom 3 verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct A3Report {
    pub holds: bool,
    /// Minimum level inside the cluster.
    pub min_inside: Rational,
    /// The densest outside neighbor, when the cluster has any.
    pub blocking: Option<(RegionId, Rational)>,
    /// The comparison was an exact tie; ties fail the strict inequality.
    pub tie: bool,
}

/// Axiom 3 with a witness: the minimum level inside must strictly exceed
/// every level among neighbor-adjacent regions outside; vacuously true when
/// there are none.
pub fn check_a3_report(cluster: &BTreeSet<RegionId>, complex: &RegionComplex) -> Result<A3Report> {
    check_ids(cluster, complex)?;
    let min_inside = cluster
        .iter()
        .map(|&id| complex.level(id).map(Rational::clone))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("nonempty");

    let mut blocking: Option<(RegionId, Rational)> = None;
    for &id in cluster {
        for out in complex.adjacent_to(id, Adjacency::Neighbor)? {
            if cluster.contains(&out) {
                continue;
            }
            let level = complex.level(out)?.clone();
            if blocking.as_ref().map_or(true, |(_, best)| level > *best) {
                blocking = Some((out, level));
            }
        }
    }

    let (holds, tie) = match &blocking {
        None => (true, false),
        Some((_, max_outside)) => (min_inside > *max_outside, min_inside == *max_outside),
    };
    Ok(A3Report {
        holds,
        min_inside,
        blocking,
        tie,
    })
}

/// Axiom 3 verdict alone.
pub fn check_a3(cluster: &BTreeSet<RegionId>, complex: &RegionComplex) -> Result<bool> {
    Ok(check_a3_report(cluster, complex)?.holds)
}

/// Every nonempty region subset satisfying axioms 1 and 3 (axiom 2 is
/// automatic). The result is asserted to be nested. Capped at
/// [`ENUMERATION_CAP`] regions.
pub fn enumerate_axiom_clusters(complex: &RegionComplex) -> Result<ClusterSet> {
    let ids = complex.region_ids();
    let m = ids.len();
    if m > ENUMERATION_CAP {
        return Err(Error::TooManyRegions(m, ENUMERATION_CAP));
    }
    let mut clusters = BTreeSet::new();
    for mask in 1u64..(1u64 << m) {
        let cluster: BTreeSet<RegionId> = ids
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &id)| id)
            .collect();
        if check_a1(&cluster, complex)? && check_a3(&cluster, complex)? {
            clusters.insert(cluster);
        }
    }
    let out = ClusterSet { clusters };
    debug_assert!(is_cluster_tree(&out));
    Ok(out)
}

/// True when the collection is pairwise disjoint-or-nested.
pub fn is_cluster_tree(set: &ClusterSet) -> bool {
    let clusters: Vec<&BTreeSet<RegionId>> = set.clusters.iter().collect();
    for (i, a) in clusters.iter().enumerate() {
        for b in clusters.iter().skip(i + 1) {
            let disjoint = a.is_disjoint(b);
            let nested = a.is_subset(b) || b.is_subset(a);
            if !disjoint && !nested {
                return false;
            }
        }
    }
    true
}

/// True when `c1` refines `c2`, i.e. contains every cluster of `c2`.
pub fn is_finer(c1: &ClusterSet, c2: &ClusterSet) -> bool {
    c2.clusters.is_subset(&c1.clusters)
}
