//! Merge distortion is a pseudometric: distance zero does not force
//! isomorphic trees.
//!
//! The step chain (levels 1/2, 1/3, 1/6) admits a decorated tree with an
//! extra singleton at an existing height. No merge height changes, so the
//! distance is exactly zero while the shapes differ. A uniform level shift,
//! by contrast, moves the distance by exactly the shift, witnessing that
//! the sup-norm bound on merge distortion is tight.
//!
//! Run with: cargo run --example merge_distortion

use clustertree::fixtures::{step_chain_complex, step_chain_tree, step_chain_tree_decorated};
use clustertree::{
    merge_distortion, merge_height, merge_height_maximin, ratio, sweep_tree, Adjacency,
    RegionComplex, Result,
};

fn main() -> Result<()> {
    let complex = step_chain_complex();
    let plain = step_chain_tree();
    let decorated = step_chain_tree_decorated();

    println!("merge heights in the plain tree:");
    for (i, j) in [(0, 0), (0, 1), (1, 2), (0, 2)] {
        let via_tree = merge_height(&plain, i, j)?;
        let via_paths = merge_height_maximin(&complex, Adjacency::Touch, i, j)?;
        assert_eq!(via_tree, via_paths);
        println!("  m({i},{j}) = {via_tree}  (tree scan = bottleneck paths)");
    }

    let d = merge_distortion(&plain, &decorated)?;
    println!(
        "\nd_M(plain, decorated) = {} ({:?} mode), isomorphic: {}",
        d.value,
        d.mode,
        plain.is_isomorphic(&decorated)
    );
    assert_eq!(d.value, ratio(0, 1));
    assert!(!plain.is_isomorphic(&decorated));

    // Shift every level up by 1/12: all merge heights move together.
    let delta = ratio(1, 12);
    let shifted_regions = complex
        .regions()
        .iter()
        .map(|r| (r.id, &r.level + &delta))
        .collect();
    let touch: Vec<_> = complex.edges(Adjacency::Touch).iter().copied().collect();
    let neighbor: Vec<_> = complex
        .edges(Adjacency::Neighbor)
        .iter()
        .copied()
        .collect();
    let shifted = RegionComplex::from_abstract(shifted_regions, &touch, &neighbor)?;
    let shifted_tree = sweep_tree(&shifted, Adjacency::Touch)?;
    let d = merge_distortion(&plain, &shifted_tree)?;
    println!("d_M(plain, uniformly shifted by 1/12) = {}", d.value);
    assert_eq!(d.value, delta);
    Ok(())
}
