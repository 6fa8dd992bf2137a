//! Shifted-grid partition of R^d.
//!
//! The grid tiles space with half-open boxes of side `scale`. Anchors live
//! on a recursively shifted lattice: slabs along the last axis repeat the
//! pattern one dimension down, and consecutive slabs shift that pattern by
//! the vector (…, 1/8, 1/4, 1/2) — one half along the previous axis, one
//! quarter along the axis before it, and so on. In the plane this is the
//! familiar brick wall. The halving matters: it keeps every cell-boundary
//! phase of consecutive slabs distinct, so two distinct cells whose closures
//! intersect always share a facet portion of positive (d-1)-measure — the
//! partition never produces corner-only or edge-only contacts. A uniform
//! 1/2 shift does not have this property from dimension three on: its shift
//! cancels against the in-slab phases and aligns cell edges across slabs.
//!
//! Anchor coordinates are multiples of 2^(1-d) and are stored as exact
//! integers in those units, so all lattice arithmetic is drift-free.

use crate::error::{Error, Result};

/// Identifier of one grid cell: its lattice anchor.
///
/// Coordinates are stored as integers in units of `2^(1-d)` where `d` is the
/// dimension; the cell side is `2^(d-1)` units, i.e. one lattice coordinate
/// unit, scaled by the grid's `scale`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    units: Vec<i64>,
}

impl CellId {
    /// Builds a cell id from raw unit coordinates.
    pub fn from_units(units: Vec<i64>) -> Self {
        CellId { units }
    }

    /// Builds a cell id from lattice coordinates. Every coordinate must be
    /// an exact multiple of `2^(1-d)`.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        let side = cell_side(coords.len());
        let mut units = Vec::with_capacity(coords.len());
        for &c in coords {
            let scaled = c * side as f64;
            if !scaled.is_finite() || scaled.fract() != 0.0 {
                return Err(Error::NotDyadic {
                    value: c,
                    dim: coords.len(),
                });
            }
            units.push(scaled as i64);
        }
        Ok(CellId { units })
    }

    /// Anchor coordinates in raw units of `2^(1-d)`.
    pub fn units(&self) -> &[i64] {
        &self.units
    }

    /// Anchor coordinates in lattice units (exact dyadic floats).
    pub fn coords(&self) -> Vec<f64> {
        let side = cell_side(self.units.len()) as f64;
        self.units.iter().map(|&a| a as f64 / side).collect()
    }

    pub fn dim(&self) -> usize {
        self.units.len()
    }
}

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords().into_iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if c.fract() == 0.0 {
                write!(f, "{}", c as i64)?;
            } else {
                write!(f, "{c}")?;
            }
        }
        write!(f, ")")
    }
}

/// Cell side length in anchor units: `2^(d-1)`.
pub(crate) fn cell_side(dim: usize) -> i64 {
    1i64 << (dim.saturating_sub(1))
}

/// Slab-to-slab shift applied to axis `i` when descending from axis `t`
/// (both zero-based, `i < t`), in anchor units: the shift halves per axis of
/// separation.
fn slab_shift(dim: usize, t: usize, i: usize) -> i64 {
    1i64 << (dim - 1 - t + i)
}

fn is_member(units: &[i64], dim: usize, len: usize) -> bool {
    let side = cell_side(dim);
    if len == 1 {
        return units[0].rem_euclid(side) == 0;
    }
    let last = units[len - 1];
    if last.rem_euclid(side) != 0 {
        return false;
    }
    let k = last / side;
    let shifted: Vec<i64> = units[..len - 1]
        .iter()
        .enumerate()
        .map(|(i, &a)| a - k * slab_shift(dim, len - 1, i))
        .collect();
    is_member(&shifted, dim, len - 1)
}

/// Membership test for the shifted lattice, on anchors in raw units.
pub fn is_lattice_anchor_units(units: &[i64]) -> bool {
    if units.is_empty() {
        return false;
    }
    is_member(units, units.len(), units.len())
}

/// Membership test taking lattice coordinates, with a dimension check.
///
/// Inputs may be any exact dyadics down to half-integers (or the lattice's
/// own resolution, whichever is finer); values off the lattice's resolution
/// are simply not lattice points.
pub fn is_lattice_anchor(coords: &[f64], dim: usize) -> Result<bool> {
    if coords.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: coords.len(),
        });
    }
    let side = cell_side(dim);
    let fine = side.max(2);
    let ratio = fine / side;
    let mut units = Vec::with_capacity(dim);
    for &c in coords {
        let scaled = c * fine as f64;
        if !scaled.is_finite() || scaled.fract() != 0.0 {
            return Err(Error::NotDyadic { value: c, dim });
        }
        let v = scaled as i64;
        if v.rem_euclid(ratio) != 0 {
            return Ok(false);
        }
        units.push(v / ratio);
    }
    Ok(is_lattice_anchor_units(&units))
}

/// A half-open axis-aligned box `[lo, hi)`, the geometry of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl CellBox {
    pub fn contains(&self, point: &[f64]) -> bool {
        point
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&p, (&lo, &hi))| lo <= p && p < hi)
    }

    /// Euclidean diameter (the main diagonal).
    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&lo, &hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt()
    }
}

/// How the closed boxes of two distinct cells meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    /// Closures are disjoint.
    None,
    /// Closures intersect in a facet portion of positive (d-1)-measure, so
    /// the interior of the union is connected.
    Facet,
    /// Closures intersect only in a face of dimension below d-1 (a corner or
    /// edge contact), or overlap. The grid never produces this between its
    /// own cells; the variant exists so the property can be checked and
    /// arbitrary anchor pairs classified.
    Degenerate,
}

/// Classifies the contact between the closed boxes of two equal-dimension
/// cells (scale-invariant).
pub fn cell_contact(a: &CellId, b: &CellId) -> Contact {
    debug_assert_eq!(a.dim(), b.dim());
    if a == b {
        return Contact::Facet;
    }
    let side = cell_side(a.dim());
    let mut zero_width = 0usize;
    for (&ai, &bi) in a.units().iter().zip(b.units()) {
        let gap = (ai - bi).abs();
        if gap > side {
            return Contact::None;
        }
        if gap == side {
            zero_width += 1;
        }
    }
    if zero_width == 1 {
        Contact::Facet
    } else {
        Contact::Degenerate
    }
}

/// All anchors (lattice or not) with each unit coordinate within
/// `radius_units` of the base. For local brute-force enumeration; callers
/// filter by lattice membership.
pub fn candidate_anchors(base_units: &[i64], radius_units: i64) -> Vec<CellId> {
    let mut out = vec![Vec::new()];
    for &b in base_units {
        let mut next = Vec::with_capacity(out.len() * (2 * radius_units as usize + 1));
        for prefix in &out {
            for off in -radius_units..=radius_units {
                let mut v = prefix.clone();
                v.push(b + off);
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(CellId::from_units).collect()
}

/// The shifted-grid partition of R^d at a fixed cell side length.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedGrid {
    dim: usize,
    scale: f64,
}

impl ShiftedGrid {
    /// A grid with the given cell side length; cells have diameter
    /// `scale * sqrt(dim)`.
    pub fn new(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if dim > 32 {
            return Err(Error::InvalidGrid(format!(
                "dimension {dim} is above the supported limit of 32"
            )));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        Ok(ShiftedGrid { dim, scale })
    }

    /// A grid whose cells have the requested diameter, i.e. side length
    /// `diameter / sqrt(dim)`.
    pub fn with_target_diameter(dim: usize, diameter: f64) -> Result<Self> {
        if !(diameter > 0.0) || !diameter.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "diameter must be positive and finite, got {diameter}"
            )));
        }
        Self::new(dim, diameter / (dim as f64).sqrt())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }

    fn check_anchor(&self, cell: &CellId) -> Result<()> {
        self.check_dim(cell.dim())?;
        if !is_lattice_anchor_units(cell.units()) {
            return Err(Error::InvalidAnchor(cell.units().to_vec()));
        }
        Ok(())
    }

    /// The unique cell whose half-open box contains the point.
    pub fn cell_of(&self, point: &[f64]) -> Result<CellId> {
        self.check_dim(point.len())?;
        let side = cell_side(self.dim) as f64;
        let units: Vec<f64> = point.iter().map(|&p| p / self.scale * side).collect();
        let cell = CellId::from_units(locate(&units, self.dim, self.dim));
        debug_assert!(is_lattice_anchor_units(cell.units()));
        Ok(cell)
    }

    /// The half-open box of a cell.
    pub fn cell_box(&self, cell: &CellId) -> Result<CellBox> {
        self.check_anchor(cell)?;
        let side = cell_side(self.dim) as f64;
        let lo: Vec<f64> = cell
            .units()
            .iter()
            .map(|&a| a as f64 / side * self.scale)
            .collect();
        let hi: Vec<f64> = lo.iter().map(|&l| l + self.scale).collect();
        Ok(CellBox { lo, hi })
    }

    /// All cells whose closed boxes share a facet portion of positive
    /// (d-1)-measure with this cell's closed box. For this grid that is
    /// exactly the set of cells whose closures meet the cell's closure.
    ///
    /// Found by probing just outside each face: facet overlaps are at least
    /// one anchor unit wide per tangent axis, so a unit-spaced probe lattice
    /// on each face cannot miss a neighbor.
    pub fn cell_neighbors(&self, cell: &CellId) -> Result<Vec<CellId>> {
        self.check_anchor(cell)?;
        let side = cell_side(self.dim);
        let side_f = side as f64;
        let mut found = std::collections::BTreeSet::new();
        // Tangent probe offsets: k + 1/2 units for k in 0..side.
        let mut tangent = vec![0i64; self.dim.saturating_sub(1)];
        loop {
            for axis in 0..self.dim {
                for &outside in &[-0.5, side_f + 0.5] {
                    let mut p_units = Vec::with_capacity(self.dim);
                    let mut ti = 0;
                    for i in 0..self.dim {
                        if i == axis {
                            p_units.push(cell.units()[i] as f64 + outside);
                        } else {
                            p_units.push(cell.units()[i] as f64 + tangent[ti] as f64 + 0.5);
                            ti += 1;
                        }
                    }
                    let point: Vec<f64> =
                        p_units.iter().map(|&u| u / side_f * self.scale).collect();
                    let other = self.cell_of(&point)?;
                    if other != *cell {
                        debug_assert_eq!(cell_contact(cell, &other), Contact::Facet);
                        found.insert(other);
                    }
                }
            }
            // Advance the mixed-radix tangent counter.
            let mut i = 0;
            loop {
                if i == tangent.len() {
                    break;
                }
                tangent[i] += 1;
                if tangent[i] < side {
                    break;
                }
                tangent[i] = 0;
                i += 1;
            }
            if i == tangent.len() {
                break;
            }
        }
        Ok(found.into_iter().collect())
    }
}

/// Point location in anchor units: the last coordinate pins the slab, and
/// the prefix is located in the slab's shifted frame.
fn locate(units: &[f64], dim: usize, len: usize) -> Vec<i64> {
    let side = cell_side(dim);
    let side_f = side as f64;
    if len == 1 {
        return vec![(units[0] / side_f).floor() as i64 * side];
    }
    let k = (units[len - 1] / side_f).floor() as i64;
    let shifted: Vec<f64> = units[..len - 1]
        .iter()
        .enumerate()
        .map(|(i, &u)| u - (k * slab_shift(dim, len - 1, i)) as f64)
        .collect();
    let mut prefix = locate(&shifted, dim, len - 1);
    for (i, a) in prefix.iter_mut().enumerate() {
        *a += k * slab_shift(dim, len - 1, i);
    }
    prefix.push(k * side);
    prefix
}
