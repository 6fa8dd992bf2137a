//! Tour of the shifted-grid partition: point location, cell boxes, and the
//! facet-only contact guarantee.
//!
//! Run with: cargo run --example shifted_grid

use clustertree::grid::{cell_contact, is_lattice_anchor, Contact};
use clustertree::{Result, ShiftedGrid};

fn main() -> Result<()> {
    // The plane at scale 1: the brick wall.
    let grid = ShiftedGrid::new(2, 1.0)?;
    for point in [[0.3, 0.7], [0.3, 1.2], [0.0, 1.0], [-2.6, 3.9]] {
        let cell = grid.cell_of(&point)?;
        let b = grid.cell_box(&cell)?;
        println!(
            "point {point:?} lies in cell {cell} with box [{:.2}, {:.2}) x [{:.2}, {:.2})",
            b.lo[0], b.hi[0], b.lo[1], b.hi[1]
        );
    }

    // Anchors come from a shifted lattice: odd rows move half a cell.
    for coords in [[0.0, 0.0], [0.5, 1.0], [0.5, 0.0]] {
        println!(
            "({}, {}) is a lattice anchor: {}",
            coords[0],
            coords[1],
            is_lattice_anchor(&coords, 2)?
        );
    }

    // Every neighbor shares a positive-measure facet; corner-only contacts
    // do not occur in any dimension.
    let origin = grid.cell_of(&[0.5, 0.5])?;
    let neighbors = grid.cell_neighbors(&origin)?;
    println!("\ncell {origin} has {} neighbors:", neighbors.len());
    for n in &neighbors {
        assert_eq!(cell_contact(&origin, n), Contact::Facet);
        println!("  {n}");
    }

    // The same holds in three dimensions, where consecutive slabs shift by
    // (1/4, 1/2) so no cell edges line up.
    let grid3 = ShiftedGrid::new(3, 0.5)?;
    let cell3 = grid3.cell_of(&[0.1, 0.2, 0.3])?;
    let neighbors3 = grid3.cell_neighbors(&cell3)?;
    println!("\nin 3-D, cell {cell3} has {} facet neighbors", neighbors3.len());
    for n in &neighbors3 {
        assert_eq!(cell_contact(&cell3, n), Contact::Facet);
    }

    // Cell diameter is scale * sqrt(d) exactly.
    let b = grid3.cell_box(&cell3)?;
    println!(
        "3-D cell diameter {:.12} = scale * sqrt(3) = {:.12}",
        b.diameter(),
        0.5 * 3f64.sqrt()
    );
    Ok(())
}
