//! Checking candidate clusters against the three axioms, and recovering the
//! finest axiom tree by brute force.
//!
//! Run with: cargo run --example axiom_verification

use std::collections::BTreeSet;

use clustertree::fixtures::pinch_complex;
use clustertree::{
    axiom_tree, check_a1, check_a3, check_a3_report, enumerate_axiom_clusters, is_cluster_tree,
    is_finer, ClusterSet, RegionId, Result,
};

fn set(ids: &[RegionId]) -> BTreeSet<RegionId> {
    ids.iter().copied().collect()
}

fn main() -> Result<()> {
    let complex = pinch_complex();

    for cluster in [set(&[1]), set(&[2]), set(&[1, 2]), set(&[1, 3]), set(&[1, 2, 3])] {
        let a1 = check_a1(&cluster, &complex)?;
        let a3 = check_a3(&cluster, &complex)?;
        let ids: Vec<_> = cluster.iter().collect();
        println!("cluster {ids:?}: connected interior = {a1}, surrounded by lower density = {a3}");
    }

    // A3 details: why {1,3} fails.
    let report = check_a3_report(&set(&[1, 3]), &complex)?;
    let (blocker, level) = report.blocking.expect("has an outside neighbor");
    println!(
        "\n{{1,3}} has minimum level {} but outside neighbor {} at level {}",
        report.min_inside, blocker, level
    );

    // All axiom clusters by subset enumeration; they are automatically
    // nested, and the sweep-built axiom tree has exactly the same clusters.
    let oracle = enumerate_axiom_clusters(&complex)?;
    println!("\nall {} axiom clusters:", oracle.len());
    for cluster in &oracle.clusters {
        let ids: Vec<_> = cluster.iter().collect();
        println!("  {ids:?}");
    }
    assert!(is_cluster_tree(&oracle));

    let tree = ClusterSet::new(axiom_tree(&complex)?.cluster_set());
    assert!(is_finer(&oracle, &tree) && is_finer(&tree, &oracle));
    println!("\nsweep-built axiom tree matches the enumeration exactly");
    Ok(())
}
