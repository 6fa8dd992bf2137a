//! Named fixtures and randomized generators.
//!
//! The named complexes and trees here are the small worked examples used
//! across the test suites and shipped by the command-line `fixtures`
//! subcommand. The random generators produce seeded complexes and
//! dendrograms for the property suites.

use std::collections::BTreeSet;

use rand::Rng;

use crate::density::DensitySpec;
use crate::grid::{CellId, ShiftedGrid};
use crate::rational::{ratio, Rational};
use crate::regions::{Adjacency, RegionComplex, RegionId};
use crate::tree::{sweep_tree, Dendrogram, TreeNode};

/// Three regions with levels 3 > 2 > 1 where the two dense regions touch
/// only through a pinch point (touching without neighboring) and both
/// neighbor the shallow region. The level-set tree chains them; the axiom
/// tree keeps the dense regions separate.
pub fn pinch_complex() -> RegionComplex {
    RegionComplex::from_abstract(
        vec![(1, ratio(3, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
        &[(1, 2), (1, 3), (2, 3)],
        &[(1, 3), (2, 3)],
    )
    .expect("fixture is valid")
}

/// Three unit intervals on a line with levels 1/2, 1/3, 1/6; regions are
/// numbered 0, 1, 2 left to right.
pub fn step_chain_complex() -> RegionComplex {
    let grid = ShiftedGrid::new(1, 1.0).expect("valid grid");
    RegionComplex::from_cells(
        vec![
            (CellId::from_coords(&[-1.0]).expect("anchor"), ratio(1, 2)),
            (CellId::from_coords(&[0.0]).expect("anchor"), ratio(1, 3)),
            (CellId::from_coords(&[1.0]).expect("anchor"), ratio(1, 6)),
        ],
        grid,
    )
    .expect("fixture is valid")
}

/// The level-set tree of the step chain: {0} ⊂ {0,1} ⊂ {0,1,2}.
pub fn step_chain_tree() -> Dendrogram {
    sweep_tree(&step_chain_complex(), Adjacency::Touch).expect("fixture sweeps")
}

/// The step-chain tree decorated with the redundant singleton {1} at the
/// same height as {0,1}. Merge heights are unchanged, so this tree is at
/// merge distortion zero from [`step_chain_tree`] while not being
/// isomorphic to it.
pub fn step_chain_tree_decorated() -> Dendrogram {
    let set = |ids: &[RegionId]| ids.iter().copied().collect::<BTreeSet<_>>();
    Dendrogram::from_nodes(vec![
        TreeNode {
            cluster: set(&[0]),
            height: ratio(1, 2),
            parent: Some(2),
        },
        TreeNode {
            cluster: set(&[1]),
            height: ratio(1, 3),
            parent: Some(2),
        },
        TreeNode {
            cluster: set(&[0, 1]),
            height: ratio(1, 3),
            parent: Some(3),
        },
        TreeNode {
            cluster: set(&[0, 1, 2]),
            height: ratio(1, 6),
            parent: None,
        },
    ])
    .expect("fixture is a valid dendrogram")
}

/// A complex of several separated blobs (no edges between blobs); blob `k`
/// is a small chain of one to three regions. Region ids are sequential.
pub fn scattered_blobs(blobs: usize) -> RegionComplex {
    let mut regions = Vec::new();
    let mut edges = Vec::new();
    let mut next = 0 as RegionId;
    for b in 0..blobs {
        let size = 1 + (b % 3);
        let base = next;
        for k in 0..size {
            let level = ratio(2 + (b % 4) as i64, 1 + k as i64);
            regions.push((next, level));
            if k > 0 {
                edges.push((next - 1, next));
            }
            next += 1;
        }
        let _ = base;
    }
    RegionComplex::from_abstract(regions, &edges, &edges).expect("fixture is valid")
}

/// The two-bump mixture on the line used by the discretization
/// experiments: 0.6 N(-2, 1) + 0.4 N(2, 1).
pub fn bimodal_mixture_1d() -> DensitySpec {
    DensitySpec::gaussian_mixture(
        1,
        vec![0.6, 0.4],
        vec![vec![-2.0], vec![2.0]],
        vec![1.0, 1.0],
    )
    .expect("fixture is valid")
}

/// Two equal standard bumps in the plane at (±2, 0); by symmetry the
/// density's saddle sits at the origin.
pub fn bimodal_mixture_2d() -> DensitySpec {
    DensitySpec::gaussian_mixture(
        2,
        vec![0.5, 0.5],
        vec![vec![-2.0, 0.0], vec![2.0, 0.0]],
        vec![1.0, 1.0],
    )
    .expect("fixture is valid")
}

/// Random positive level: small numerator and denominator so exact
/// arithmetic stays cheap; occasionally reuses an earlier level to exercise
/// equal-level batching.
fn random_level<R: Rng>(rng: &mut R, existing: &[Rational]) -> Rational {
    if !existing.is_empty() && rng.random_bool(0.25) {
        return existing[rng.random_range(0..existing.len())].clone();
    }
    ratio(rng.random_range(1..=60), rng.random_range(1..=12))
}

/// A random complex with `2..=max_regions` regions whose neighbor graph is
/// connected: a random spanning tree forms the neighbor skeleton, extra
/// pairs become touch edges with probability `extra_touch`, and each extra
/// touch edge is also a neighbor edge with probability `promote`. With
/// `promote = 1.0` every touching pair neighbors, i.e. the complex has the
/// internally connected property.
pub fn random_complex<R: Rng>(
    rng: &mut R,
    max_regions: usize,
    extra_touch: f64,
    promote: f64,
) -> RegionComplex {
    let m = rng.random_range(2..=max_regions.max(2));
    let mut levels: Vec<Rational> = Vec::with_capacity(m);
    for _ in 0..m {
        let l = random_level(rng, &levels);
        levels.push(l);
    }
    let regions: Vec<(RegionId, Rational)> = levels
        .into_iter()
        .enumerate()
        .map(|(i, l)| (i as RegionId, l))
        .collect();

    let mut touch = Vec::new();
    let mut neighbor = Vec::new();
    // Random spanning tree keeps the neighbor graph connected.
    for v in 1..m {
        let u = rng.random_range(0..v);
        touch.push((u as RegionId, v as RegionId));
        neighbor.push((u as RegionId, v as RegionId));
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let pair = (a as RegionId, b as RegionId);
            if neighbor.contains(&pair) {
                continue;
            }
            if rng.random_bool(extra_touch) {
                touch.push(pair);
                if rng.random_bool(promote) {
                    neighbor.push(pair);
                }
            }
        }
    }
    RegionComplex::from_abstract(regions, &touch, &neighbor).expect("generated complex is valid")
}

/// A random complex with the internally connected property (touch and
/// neighbor relations coincide).
pub fn random_f_int_complex<R: Rng>(rng: &mut R, max_regions: usize) -> RegionComplex {
    random_complex(rng, max_regions, 0.3, 1.0)
}

/// A random dendrogram over the complex: the full support is the root and
/// clusters split recursively into random blocks; every height is the
/// minimum level over the cluster, so the height function is the density's.
pub fn random_dendrogram<R: Rng>(rng: &mut R, complex: &RegionComplex) -> Dendrogram {
    fn height_of(complex: &RegionComplex, cluster: &BTreeSet<RegionId>) -> Rational {
        cluster
            .iter()
            .map(|&id| complex.level(id).expect("known region").clone())
            .min()
            .expect("nonempty cluster")
    }

    fn split<R: Rng>(
        rng: &mut R,
        complex: &RegionComplex,
        cluster: BTreeSet<RegionId>,
        parent: Option<usize>,
        nodes: &mut Vec<TreeNode>,
    ) {
        let idx = nodes.len();
        nodes.push(TreeNode {
            height: height_of(complex, &cluster),
            cluster: cluster.clone(),
            parent,
        });
        if cluster.len() < 2 || rng.random_bool(0.25) {
            return;
        }
        // Partition into two nonempty blocks; each recurses with some
        // probability, so not every block becomes a cluster.
        let members: Vec<RegionId> = cluster.into_iter().collect();
        let cut = rng.random_range(1..members.len());
        let mut shuffled = members;
        for i in (1..shuffled.len()).rev() {
            let j = rng.random_range(0..=i);
            shuffled.swap(i, j);
        }
        let (left, right) = shuffled.split_at(cut);
        for block in [left, right] {
            if rng.random_bool(0.8) {
                split(
                    rng,
                    complex,
                    block.iter().copied().collect(),
                    Some(idx),
                    nodes,
                );
            }
        }
    }

    let all: BTreeSet<RegionId> = complex.region_ids().into_iter().collect();
    let mut nodes = Vec::new();
    split(rng, complex, all, None, &mut nodes);
    Dendrogram::from_nodes(nodes).expect("generated dendrogram is valid")
}
