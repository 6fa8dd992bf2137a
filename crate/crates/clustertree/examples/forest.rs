//! Densities with disconnected support get a forest: one tree per
//! connected component, with merge height zero across components.
//!
//! Run with: cargo run --example forest

use clustertree::fixtures::scattered_blobs;
use clustertree::metric::MergeIndex;
use clustertree::{sweep_forest, sweep_tree, Adjacency, Result};

fn main() -> Result<()> {
    let complex = scattered_blobs(8);
    println!(
        "complex with {} regions in 8 separated blobs; in_F = {}",
        complex.len(),
        complex.classify().in_f
    );

    // A single tree is refused on disconnected support.
    match sweep_tree(&complex, Adjacency::Neighbor) {
        Err(e) => println!("sweep_tree: {e}"),
        Ok(_) => unreachable!("disconnected support cannot give one tree"),
    }

    let forest = sweep_forest(&complex, Adjacency::Neighbor)?;
    println!("forest has {} trees:", forest.len());
    for (k, tree) in forest.trees().iter().enumerate() {
        let root = &tree.nodes()[tree.root()];
        let ids: Vec<String> = root.cluster.iter().map(|id| id.to_string()).collect();
        println!(
            "  tree {k}: {} clusters over regions {{{}}}",
            tree.len(),
            ids.join(",")
        );
    }

    // Regions in different components never share a cluster.
    let index = MergeIndex::from_forest(&forest);
    let first = *forest.trees()[0].region_ids().iter().next().unwrap();
    let last = *forest.trees()[7].region_ids().iter().next().unwrap();
    println!(
        "merge height across components m({first},{last}) = {}",
        index.merge_height(first, last)
    );
    Ok(())
}
