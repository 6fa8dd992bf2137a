//! Merge heights and the merge distortion distance.
//!
//! Merge heights of a dendrogram are read off the tree (height of the
//! smallest cluster containing both regions). Independently of any tree, the
//! maximin formulation computes the same quantity for sweep trees straight
//! from the complex: the best bottleneck level over adjacency paths. The
//! merge distortion distance is the largest absolute difference of merge
//! heights over a domain; over regions it is exact, because merge heights of
//! region-union clusters are constant on each region.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::regions::{Adjacency, RegionComplex, RegionId};
use crate::tree::{Dendrogram, Forest};

/// Merge height of two regions in a dendrogram: the height of the smallest
/// cluster containing both, zero when none does.
pub fn merge_height(tree: &Dendrogram, i: RegionId, j: RegionId) -> Result<Rational> {
    let ids = tree.region_ids();
    if !ids.contains(&i) {
        return Err(Error::UnknownRegion(i));
    }
    if !ids.contains(&j) {
        return Err(Error::UnknownRegion(j));
    }
    Ok(tree.merge_height(i, j))
}

/// Merge height computed directly on the complex: the maximum over
/// adjacency paths from `i` to `j` of the minimum region level along the
/// path (endpoints included); zero when no path exists. Serves as the
/// independent oracle for [`merge_height`] on sweep trees.
pub fn merge_height_maximin(
    complex: &RegionComplex,
    adjacency: Adjacency,
    i: RegionId,
    j: RegionId,
) -> Result<Rational> {
    let src = complex.region_index(i)?;
    let dst = complex.region_index(j)?;
    let regions = complex.regions();
    let lists = complex.adjacency_lists(adjacency);

    // Widest-path search: the key of a vertex is the best bottleneck level
    // achievable from the source.
    let mut best: Vec<Option<Rational>> = vec![None; regions.len()];
    let mut heap: BinaryHeap<(Rational, Reverse<usize>)> = BinaryHeap::new();
    best[src] = Some(regions[src].level.clone());
    heap.push((regions[src].level.clone(), Reverse(src)));
    while let Some((width, Reverse(v))) = heap.pop() {
        if best[v].as_ref() != Some(&width) {
            continue;
        }
        if v == dst {
            return Ok(width);
        }
        for &u in &lists[v] {
            let through = width.clone().min(regions[u].level.clone());
            if best[u].as_ref().map_or(true, |b| through > *b) {
                best[u] = Some(through.clone());
                heap.push((through, Reverse(u)));
            }
        }
    }
    Ok(best[dst].clone().unwrap_or_else(Rational::zero))
}

/// Square table of merge heights over the region ids of a dendrogram.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeHeightTable {
    ids: Vec<RegionId>,
    values: Vec<Rational>,
}

impl MergeHeightTable {
    pub fn from_forest(forest: &Forest) -> Self {
        let ids: Vec<RegionId> = forest.region_ids().into_iter().collect();
        let index = MergeIndex::from_forest(forest);
        let n = ids.len();
        let mut values = vec![Rational::zero(); n * n];
        for a in 0..n {
            for b in a..n {
                let v = index.merge_height(ids[a], ids[b]);
                values[a * n + b] = v.clone();
                values[b * n + a] = v;
            }
        }
        MergeHeightTable { ids, values }
    }

    pub fn from_tree(tree: &Dendrogram) -> Self {
        Self::from_forest(&Forest::from_tree(tree.clone()))
    }

    pub fn ids(&self) -> &[RegionId] {
        &self.ids
    }

    pub fn get(&self, i: RegionId, j: RegionId) -> Result<&Rational> {
        let a = self
            .ids
            .iter()
            .position(|&id| id == i)
            .ok_or(Error::UnknownRegion(i))?;
        let b = self
            .ids
            .iter()
            .position(|&id| id == j)
            .ok_or(Error::UnknownRegion(j))?;
        Ok(&self.values[a * self.ids.len() + b])
    }
}

/// Precomputed node chains per region, for bulk merge-height queries.
///
/// For each region, the nodes containing it form a chain ending at its
/// component's root; the merge height of two regions is the height of the
/// deepest node their chains share.
pub struct MergeIndex {
    /// Node chains per region, root last, as (tree, node) pairs.
    chains: BTreeMap<RegionId, Vec<(usize, usize)>>,
    heights: Vec<Vec<Rational>>,
}

impl MergeIndex {
    pub fn from_forest(forest: &Forest) -> Self {
        let mut chains: BTreeMap<RegionId, Vec<(usize, usize)>> = BTreeMap::new();
        let mut heights = Vec::with_capacity(forest.trees().len());
        for (t, tree) in forest.trees().iter().enumerate() {
            heights.push(tree.nodes().iter().map(|n| n.height.clone()).collect());
            for (idx, node) in tree.nodes().iter().enumerate() {
                for &id in &node.cluster {
                    chains.entry(id).or_default().push((t, idx));
                }
            }
        }
        // Align chains by inclusion, root (largest cluster) first. Nested
        // distinct clusters have distinct sizes, so size is a total order
        // along each chain. Common nodes of two chains then sit at the same
        // positions, a shared prefix.
        for chain in chains.values_mut() {
            chain.sort_by_key(|&(t, idx)| Reverse(forest.trees()[t].nodes()[idx].cluster.len()));
        }
        MergeIndex { chains, heights }
    }

    pub fn from_tree(tree: &Dendrogram) -> Self {
        Self::from_forest(&Forest::from_tree(tree.clone()))
    }

    /// Merge height of two regions; zero when they share no cluster.
    pub fn merge_height(&self, i: RegionId, j: RegionId) -> Rational {
        let (Some(ci), Some(cj)) = (self.chains.get(&i), self.chains.get(&j)) else {
            return Rational::zero();
        };
        let mut deepest: Option<(usize, usize)> = None;
        for (a, b) in ci.iter().zip(cj.iter()) {
            if a == b {
                deepest = Some(*a);
            } else {
                break;
            }
        }
        match deepest {
            Some((t, idx)) => self.heights[t][idx].clone(),
            None => Rational::zero(),
        }
    }

    /// Merge height of two optional regions; a point off the support merges
    /// with nothing, at height zero.
    pub fn merge_height_opt(&self, i: Option<RegionId>, j: Option<RegionId>) -> Rational {
        match (i, j) {
            (Some(i), Some(j)) => self.merge_height(i, j),
            _ => Rational::zero(),
        }
    }
}

/// Whether a distortion value is exact or a sampled lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionMode {
    Exact,
    SampledLowerBound,
}

impl DistortionMode {
    pub fn name(self) -> &'static str {
        match self {
            DistortionMode::Exact => "exact",
            DistortionMode::SampledLowerBound => "sampled",
        }
    }
}

/// A merge distortion value with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Distortion {
    pub value: Rational,
    pub mode: DistortionMode,
    /// Region pair (exact mode) or sample-index pair (sampled mode)
    /// achieving the maximum.
    pub witness_pair: Option<(i64, i64)>,
}

/// Exact merge distortion between two forests over the same region ids:
/// the maximum absolute merge-height difference over all region pairs.
/// Exact because merge heights of region-union clusters are constant on
/// regions.
pub fn merge_distortion_forests(f1: &Forest, f2: &Forest) -> Result<Distortion> {
    let ids1 = f1.region_ids();
    let ids2 = f2.region_ids();
    if ids1 != ids2 {
        return Err(Error::MismatchedComplexes);
    }
    let ids: Vec<RegionId> = ids1.into_iter().collect();
    let m1 = MergeIndex::from_forest(f1);
    let m2 = MergeIndex::from_forest(f2);
    let mut best = Rational::zero();
    let mut witness = None;
    for (a, &i) in ids.iter().enumerate() {
        for &j in &ids[a..] {
            let d = diff_abs(&m1.merge_height(i, j), &m2.merge_height(i, j));
            if witness.is_none() || d > best {
                best = d;
                witness = Some((i, j));
            }
        }
    }
    Ok(Distortion {
        value: best,
        mode: DistortionMode::Exact,
        witness_pair: witness,
    })
}

/// Exact merge distortion between two dendrograms over the same regions.
pub fn merge_distortion(t1: &Dendrogram, t2: &Dendrogram) -> Result<Distortion> {
    merge_distortion_forests(
        &Forest::from_tree(t1.clone()),
        &Forest::from_tree(t2.clone()),
    )
}

/// Sampled merge distortion between two forests over possibly different
/// complexes with geometry: the maximum merge-height difference over all
/// pairs of the supplied sample points. A lower bound on the true supremum.
pub fn merge_distortion_points(
    f1: &Forest,
    c1: &RegionComplex,
    f2: &Forest,
    c2: &RegionComplex,
    points: &[Vec<f64>],
) -> Result<Distortion> {
    if !c1.has_geometry() || !c2.has_geometry() {
        return Err(Error::MissingGeometry);
    }
    let m1 = MergeIndex::from_forest(f1);
    let m2 = MergeIndex::from_forest(f2);
    let r1: Vec<Option<RegionId>> = points
        .iter()
        .map(|p| c1.region_at(p))
        .collect::<Result<_>>()?;
    let r2: Vec<Option<RegionId>> = points
        .iter()
        .map(|p| c2.region_at(p))
        .collect::<Result<_>>()?;
    let mut best = Rational::zero();
    let mut witness = None;
    for a in 0..points.len() {
        for b in a..points.len() {
            let h1 = m1.merge_height_opt(r1[a], r1[b]);
            let h2 = m2.merge_height_opt(r2[a], r2[b]);
            let d = diff_abs(&h1, &h2);
            if witness.is_none() || d > best {
                best = d;
                witness = Some((a as i64, b as i64));
            }
        }
    }
    Ok(Distortion {
        value: best,
        mode: DistortionMode::SampledLowerBound,
        witness_pair: witness,
    })
}

fn diff_abs(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Exact sup-norm distance between two complexes over the same region ids:
/// the largest level difference, with a missing region counted at level
/// zero. Requires identical id sets (same regions, same geometry if any).
pub fn sup_norm_distance(f1: &RegionComplex, f2: &RegionComplex) -> Result<Rational> {
    let ids1: std::collections::BTreeSet<RegionId> = f1.region_ids().into_iter().collect();
    let ids2: std::collections::BTreeSet<RegionId> = f2.region_ids().into_iter().collect();
    if ids1 != ids2 {
        return Err(Error::MismatchedComplexes);
    }
    let mut best = Rational::zero();
    for id in ids1 {
        let d = diff_abs(f1.level(id)?, f2.level(id)?);
        if d > best {
            best = d;
        }
    }
    Ok(best)
}
