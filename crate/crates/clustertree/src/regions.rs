//! Region complexes: piecewise-constant densities with two adjacencies.
//!
//! A density here is a finite set of disjoint regions, each carrying a
//! strictly positive constant level, together with two relations on region
//! pairs: *touch* (the union of the closures is connected) and *neighbor*
//! (the interior of that union is connected). Neighboring implies touching.
//! Complexes either come with shifted-grid geometry, in which case both
//! relations are computed from the cells, or are given abstractly with the
//! relations asserted by the caller.

use std::collections::BTreeSet;
use std::collections::HashMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::grid::{cell_contact, CellId, Contact, ShiftedGrid};
use crate::rational::Rational;

/// Region identifier. Abstract complexes choose their own ids; complexes
/// built from cells number regions in input order.
pub type RegionId = i64;

/// Which adjacency relation a sweep or query runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adjacency {
    /// Closures of the union connected.
    Touch,
    /// Interior of the union of closures connected.
    Neighbor,
}

impl Adjacency {
    pub fn name(self) -> &'static str {
        match self {
            Adjacency::Touch => "touch",
            Adjacency::Neighbor => "neighbor",
        }
    }
}

/// One constant-level region.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub id: RegionId,
    pub level: Rational,
    /// Grid cells making up the region; empty for abstract complexes.
    pub cells: Vec<CellId>,
}

/// Classification of a complex against the function classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    /// Support has connected interior, certified by neighbor-graph
    /// connectivity.
    pub in_f: bool,
    /// Additionally every touching pair is neighboring.
    pub in_f_int: bool,
    pub witness: Option<ClassWitness>,
}

/// Why a complex fails a class, when it does.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassWitness {
    Empty,
    DisconnectedSupport { components: usize },
    TouchingNotNeighboring { a: RegionId, b: RegionId },
}

impl std::fmt::Display for ClassWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassWitness::Empty => write!(f, "complex has no regions"),
            ClassWitness::DisconnectedSupport { components } => {
                write!(f, "neighbor graph has {components} components")
            }
            ClassWitness::TouchingNotNeighboring { a, b } => {
                write!(f, "regions {a} and {b} touch but are not neighbors")
            }
        }
    }
}

fn edge(a: RegionId, b: RegionId) -> (RegionId, RegionId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// All offset vectors in {-1, 0, 1}^d.
fn bucket_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * 3);
        for prefix in &out {
            for off in -1..=1 {
                let mut v = prefix.clone();
                v.push(off);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Whether a group of cells is connected through shared facets.
fn cells_facet_connected(cells: &[CellId]) -> bool {
    if cells.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; cells.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for (u, cell) in cells.iter().enumerate() {
            if !seen[u] && cell_contact(&cells[v], cell) == Contact::Facet {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == cells.len()
}

/// A piecewise-constant density: regions plus the two adjacency relations.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionComplex {
    regions: Vec<Region>,
    index: HashMap<RegionId, usize>,
    touch: BTreeSet<(RegionId, RegionId)>,
    neighbor: BTreeSet<(RegionId, RegionId)>,
    grid: Option<ShiftedGrid>,
    cell_owner: HashMap<Vec<i64>, RegionId>,
}

impl RegionComplex {
    /// Builds a complex with one region per grid cell. Touch edges pair
    /// cells with intersecting closures; neighbor edges pair cells sharing a
    /// facet portion. Regions are numbered 0.. in input order.
    pub fn from_cells(cells: Vec<(CellId, Rational)>, grid: ShiftedGrid) -> Result<Self> {
        let groups = cells
            .into_iter()
            .map(|(cell, level)| (vec![cell], level))
            .collect();
        Self::from_cell_groups(groups, grid)
    }

    /// Builds a complex whose regions each own a group of cells. Each group
    /// must be facet-connected so the region has connected interior. Regions
    /// are numbered 0.. in input order.
    pub fn from_cell_groups(
        groups: Vec<(Vec<CellId>, Rational)>,
        grid: ShiftedGrid,
    ) -> Result<Self> {
        let mut owner: HashMap<Vec<i64>, RegionId> = HashMap::new();
        let mut regions = Vec::with_capacity(groups.len());
        for (i, (cells, level)) in groups.into_iter().enumerate() {
            let id = i as RegionId;
            if cells.is_empty() {
                return Err(Error::EmptyCluster);
            }
            for cell in &cells {
                if cell.dim() != grid.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: grid.dim(),
                        got: cell.dim(),
                    });
                }
                // Reject anchors off the lattice up front.
                grid.cell_box(cell)?;
                if owner.insert(cell.units().to_vec(), id).is_some() {
                    return Err(Error::DuplicateCell(cell.units().to_vec()));
                }
            }
            if level <= Rational::zero() {
                return Err(Error::NonpositiveLevel(id));
            }
            if !cells_facet_connected(&cells) {
                return Err(Error::InvalidGrid(format!(
                    "cells of region {id} do not have connected interior"
                )));
            }
            regions.push(Region { id, level, cells });
        }

        // Disjoint cells mean each side-sized bucket holds at most one
        // anchor, so scanning the 3^d surrounding buckets finds every cell
        // whose closure can intersect.
        let side = crate::grid::cell_side(grid.dim());
        let mut buckets: HashMap<Vec<i64>, (RegionId, CellId)> = HashMap::new();
        for region in &regions {
            for cell in &region.cells {
                let key: Vec<i64> = cell.units().iter().map(|&u| u.div_euclid(side)).collect();
                buckets.insert(key, (region.id, cell.clone()));
            }
        }
        let mut touch = BTreeSet::new();
        let mut neighbor = BTreeSet::new();
        let offsets = bucket_offsets(grid.dim());
        for region in &regions {
            for cell in &region.cells {
                let key: Vec<i64> = cell.units().iter().map(|&u| u.div_euclid(side)).collect();
                for off in &offsets {
                    let probe: Vec<i64> = key.iter().zip(off).map(|(&k, &o)| k + o).collect();
                    let Some((other_id, other)) = buckets.get(&probe) else {
                        continue;
                    };
                    if *other_id == region.id {
                        continue;
                    }
                    match cell_contact(cell, other) {
                        Contact::None => {}
                        Contact::Facet => {
                            touch.insert(edge(region.id, *other_id));
                            neighbor.insert(edge(region.id, *other_id));
                        }
                        Contact::Degenerate => {
                            touch.insert(edge(region.id, *other_id));
                        }
                    }
                }
            }
        }

        let index = regions
            .iter()
            .enumerate()
            .map(|(i, r)| (r.id, i))
            .collect();
        Ok(RegionComplex {
            regions,
            index,
            touch,
            neighbor,
            grid: Some(grid),
            cell_owner: owner,
        })
    }

    /// Builds a complex from asserted regions and adjacency relations; no
    /// geometry, so point queries are unavailable. Every neighbor edge must
    /// come with a touch edge.
    pub fn from_abstract(
        regions: Vec<(RegionId, Rational)>,
        touch_edges: &[(RegionId, RegionId)],
        neighbor_edges: &[(RegionId, RegionId)],
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut list = Vec::with_capacity(regions.len());
        for (id, level) in regions {
            if !seen.insert(id) {
                return Err(Error::DuplicateRegion(id));
            }
            if level <= Rational::zero() {
                return Err(Error::NonpositiveLevel(id));
            }
            list.push(Region {
                id,
                level,
                cells: Vec::new(),
            });
        }

        let mut touch = BTreeSet::new();
        for &(a, b) in touch_edges {
            if a == b {
                return Err(Error::InvalidEdge(a, b, "self edge"));
            }
            if !seen.contains(&a) {
                return Err(Error::UnknownRegion(a));
            }
            if !seen.contains(&b) {
                return Err(Error::UnknownRegion(b));
            }
            touch.insert(edge(a, b));
        }
        let mut neighbor = BTreeSet::new();
        for &(a, b) in neighbor_edges {
            if a == b {
                return Err(Error::InvalidEdge(a, b, "self edge"));
            }
            if !seen.contains(&a) {
                return Err(Error::UnknownRegion(a));
            }
            if !seen.contains(&b) {
                return Err(Error::UnknownRegion(b));
            }
            if !touch.contains(&edge(a, b)) {
                return Err(Error::NeighborWithoutTouch(a, b));
            }
            neighbor.insert(edge(a, b));
        }

        let index = list.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
        Ok(RegionComplex {
            regions: list,
            index,
            touch,
            neighbor,
            grid: None,
            cell_owner: HashMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region_ids(&self) -> Vec<RegionId> {
        self.regions.iter().map(|r| r.id).collect()
    }

    pub fn contains_region(&self, id: RegionId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn region(&self, id: RegionId) -> Result<&Region> {
        self.index
            .get(&id)
            .map(|&i| &self.regions[i])
            .ok_or(Error::UnknownRegion(id))
    }

    pub fn level(&self, id: RegionId) -> Result<&Rational> {
        Ok(&self.region(id)?.level)
    }

    pub(crate) fn region_index(&self, id: RegionId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownRegion(id))
    }

    pub fn edges(&self, adjacency: Adjacency) -> &BTreeSet<(RegionId, RegionId)> {
        match adjacency {
            Adjacency::Touch => &self.touch,
            Adjacency::Neighbor => &self.neighbor,
        }
    }

    /// Neighboring (or touching) regions of one region.
    pub fn adjacent_to(&self, id: RegionId, adjacency: Adjacency) -> Result<Vec<RegionId>> {
        self.region(id)?;
        Ok(self
            .edges(adjacency)
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect())
    }

    /// Adjacency lists in region-index space, for graph algorithms.
    pub(crate) fn adjacency_lists(&self, adjacency: Adjacency) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.regions.len()];
        for &(a, b) in self.edges(adjacency) {
            let ia = self.index[&a];
            let ib = self.index[&b];
            lists[ia].push(ib);
            lists[ib].push(ia);
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        lists
    }

    /// Connected components of the chosen adjacency graph, each a sorted
    /// list of region indices; components ordered by smallest member id.
    pub(crate) fn components(&self, adjacency: Adjacency) -> Vec<Vec<usize>> {
        let lists = self.adjacency_lists(adjacency);
        let n = self.regions.len();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &lists[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components.sort_by_key(|c| self.regions[c[0]].id);
        components
    }

    pub fn has_geometry(&self) -> bool {
        self.grid.is_some()
    }

    pub fn grid(&self) -> Option<&ShiftedGrid> {
        self.grid.as_ref()
    }

    /// The region containing a point, or `None` where the density vanishes.
    pub fn region_at(&self, point: &[f64]) -> Result<Option<RegionId>> {
        let grid = self.grid.as_ref().ok_or(Error::MissingGeometry)?;
        let cell = grid.cell_of(point)?;
        Ok(self.cell_owner.get(cell.units()).copied())
    }

    /// Density value at a point (zero off the support). Requires geometry.
    pub fn density_at(&self, point: &[f64]) -> Result<Rational> {
        match self.region_at(point)? {
            Some(id) => Ok(self.level(id)?.clone()),
            None => Ok(Rational::zero()),
        }
    }

    /// Axis-aligned bounding box of all cells, if the complex has any.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let grid = self.grid.as_ref()?;
        let mut lo: Option<Vec<f64>> = None;
        let mut hi: Option<Vec<f64>> = None;
        for region in &self.regions {
            for cell in &region.cells {
                let b = grid.cell_box(cell).ok()?;
                match (&mut lo, &mut hi) {
                    (Some(lo), Some(hi)) => {
                        for k in 0..b.lo.len() {
                            lo[k] = lo[k].min(b.lo[k]);
                            hi[k] = hi[k].max(b.hi[k]);
                        }
                    }
                    _ => {
                        lo = Some(b.lo.clone());
                        hi = Some(b.hi.clone());
                    }
                }
            }
        }
        lo.zip(hi)
    }

    /// The same complex with every level multiplied by `c > 0`.
    pub fn scale_levels(&self, c: &Rational) -> Result<RegionComplex> {
        if *c <= Rational::zero() {
            return Err(Error::InvalidNumber(format!(
                "level scale factor must be positive, got {c}"
            )));
        }
        let mut out = self.clone();
        for r in &mut out.regions {
            r.level = &r.level * c;
        }
        Ok(out)
    }

    /// Classifies the complex: `in_f` when the neighbor graph is connected
    /// (the support's interior is connected), `in_f_int` when additionally
    /// every touching pair is neighboring.
    pub fn classify(&self) -> ClassReport {
        if self.regions.is_empty() {
            // The empty set counts as disconnected.
            return ClassReport {
                in_f: false,
                in_f_int: false,
                witness: Some(ClassWitness::Empty),
            };
        }
        let components = self.components(Adjacency::Neighbor);
        let in_f = components.len() == 1;
        let extra_touch = self.touch.difference(&self.neighbor).next();
        let in_f_int = in_f && extra_touch.is_none();
        let witness = if !in_f {
            Some(ClassWitness::DisconnectedSupport {
                components: components.len(),
            })
        } else {
            extra_touch.map(|&(a, b)| ClassWitness::TouchingNotNeighboring { a, b })
        };
        ClassReport {
            in_f,
            in_f_int,
            witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    /// Three unit intervals on a line with levels 1/2, 1/3, 1/6.
    pub(crate) fn chain_complex() -> RegionComplex {
        let grid = ShiftedGrid::new(1, 1.0).unwrap();
        let cells = vec![
            (CellId::from_coords(&[-1.0]).unwrap(), ratio(1, 2)),
            (CellId::from_coords(&[0.0]).unwrap(), ratio(1, 3)),
            (CellId::from_coords(&[1.0]).unwrap(), ratio(1, 6)),
        ];
        RegionComplex::from_cells(cells, grid).unwrap()
    }

    /// Three regions where 1 and 2 touch without being neighbors, and both
    /// neighbor 3; levels 3 > 2 > 1.
    pub(crate) fn pinch_complex() -> RegionComplex {
        RegionComplex::from_abstract(
            vec![(1, ratio(3, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
            &[(1, 2), (1, 3), (2, 3)],
            &[(1, 3), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn chain_has_consecutive_edges() {
        let c = chain_complex();
        let expected: BTreeSet<_> = [(0, 1), (1, 2)].into_iter().collect();
        assert_eq!(*c.edges(Adjacency::Touch), expected);
        assert_eq!(*c.edges(Adjacency::Neighbor), expected);
    }

    #[test]
    fn single_cell_has_no_edges() {
        let grid = ShiftedGrid::new(2, 1.0).unwrap();
        let c = RegionComplex::from_cells(
            vec![(CellId::from_coords(&[0.0, 0.0]).unwrap(), ratio(1, 1))],
            grid,
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.edges(Adjacency::Touch).is_empty());
        assert!(c.edges(Adjacency::Neighbor).is_empty());
    }

    #[test]
    fn far_cells_have_no_edges() {
        let grid = ShiftedGrid::new(2, 1.0).unwrap();
        let c = RegionComplex::from_cells(
            vec![
                (CellId::from_coords(&[0.0, 0.0]).unwrap(), ratio(1, 1)),
                (CellId::from_coords(&[3.0, 0.0]).unwrap(), ratio(1, 1)),
            ],
            grid,
        )
        .unwrap();
        assert!(c.edges(Adjacency::Touch).is_empty());
    }

    #[test]
    fn duplicate_cell_is_rejected() {
        let grid = ShiftedGrid::new(1, 1.0).unwrap();
        let err = RegionComplex::from_cells(
            vec![
                (CellId::from_coords(&[0.0]).unwrap(), ratio(1, 2)),
                (CellId::from_coords(&[0.0]).unwrap(), ratio(1, 3)),
            ],
            grid,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateCell(_)));
    }

    #[test]
    fn nonpositive_level_is_rejected() {
        let grid = ShiftedGrid::new(1, 1.0).unwrap();
        let err = RegionComplex::from_cells(
            vec![(CellId::from_coords(&[0.0]).unwrap(), ratio(0, 1))],
            grid,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonpositiveLevel(0)));
        let err =
            RegionComplex::from_abstract(vec![(1, ratio(-1, 2))], &[], &[]).unwrap_err();
        assert!(matches!(err, Error::NonpositiveLevel(1)));
    }

    #[test]
    fn abstract_pinch_is_valid() {
        let c = pinch_complex();
        assert_eq!(c.len(), 3);
        assert_eq!(c.edges(Adjacency::Touch).len(), 3);
        assert_eq!(c.edges(Adjacency::Neighbor).len(), 2);
    }

    #[test]
    fn neighbor_without_touch_is_rejected() {
        let err = RegionComplex::from_abstract(
            vec![(1, ratio(1, 1)), (2, ratio(1, 1))],
            &[],
            &[(1, 2)],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NeighborWithoutTouch(1, 2)));
    }

    #[test]
    fn empty_complex_is_valid_but_not_in_f() {
        let c = RegionComplex::from_abstract(vec![], &[], &[]).unwrap();
        assert!(c.is_empty());
        let report = c.classify();
        assert!(!report.in_f);
        assert_eq!(report.witness, Some(ClassWitness::Empty));
    }

    #[test]
    fn classify_pinch() {
        let report = pinch_complex().classify();
        assert!(report.in_f);
        assert!(!report.in_f_int);
        assert_eq!(
            report.witness,
            Some(ClassWitness::TouchingNotNeighboring { a: 1, b: 2 })
        );
    }

    #[test]
    fn classify_chain() {
        let report = chain_complex().classify();
        assert!(report.in_f);
        assert!(report.in_f_int);
        assert_eq!(report.witness, None);
    }

    #[test]
    fn classify_isolated_regions() {
        let c = RegionComplex::from_abstract(
            vec![(1, ratio(1, 1)), (2, ratio(1, 1))],
            &[],
            &[],
        )
        .unwrap();
        let report = c.classify();
        assert!(!report.in_f);
        assert!(!report.in_f_int);
        assert_eq!(
            report.witness,
            Some(ClassWitness::DisconnectedSupport { components: 2 })
        );
    }

    #[test]
    fn region_at_uses_half_open_cells() {
        let c = chain_complex();
        assert_eq!(c.region_at(&[0.5]).unwrap(), Some(1));
        assert_eq!(c.region_at(&[7.0]).unwrap(), None);
        // 1.0 is the shared boundary; the cell [1, 2) owns it.
        assert_eq!(c.region_at(&[1.0]).unwrap(), Some(2));
    }

    #[test]
    fn region_at_requires_geometry() {
        let c = pinch_complex();
        assert!(matches!(c.region_at(&[0.0]), Err(Error::MissingGeometry)));
    }

    #[test]
    fn classify_is_monotone_under_neighbor_insertion() {
        // Adding a neighbor edge (with its touch edge) never flips in_f off.
        let base = RegionComplex::from_abstract(
            vec![(1, ratio(2, 1)), (2, ratio(1, 1)), (3, ratio(1, 2))],
            &[(1, 2), (2, 3), (1, 3)],
            &[(1, 2), (2, 3)],
        )
        .unwrap();
        assert!(base.classify().in_f);
        let more = RegionComplex::from_abstract(
            vec![(1, ratio(2, 1)), (2, ratio(1, 1)), (3, ratio(1, 2))],
            &[(1, 2), (2, 3), (1, 3)],
            &[(1, 2), (2, 3), (1, 3)],
        )
        .unwrap();
        assert!(more.classify().in_f);
        assert!(more.classify().in_f_int);
    }

    #[test]
    fn scaling_levels_keeps_class() {
        let c = pinch_complex();
        let scaled = c.scale_levels(&ratio(7, 3)).unwrap();
        assert_eq!(c.classify(), scaled.classify());
        assert_eq!(*scaled.level(1).unwrap(), ratio(7, 1));
        assert!(c.scale_levels(&ratio(0, 1)).is_err());
    }

    #[test]
    fn neighbor_edges_subset_of_touch_by_construction() {
        let c = chain_complex();
        assert!(c
            .edges(Adjacency::Neighbor)
            .is_subset(c.edges(Adjacency::Touch)));
    }
}
