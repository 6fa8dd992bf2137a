//! Dendrograms from descending level sweeps.
//!
//! Sweeping the distinct levels of a complex from high to low and tracking
//! connected components with union-find yields the two trees of interest:
//! over the touch graph, the components of the upper level sets (the level-set
//! tree in Hartigan's sense); over the neighbor graph, the finest tree whose
//! clusters are neighbor-connected, whole-region, and strictly denser than
//! everything adjacent outside. Disconnected supports get one tree per
//! component, a forest.

use std::collections::BTreeSet;

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::regions::{Adjacency, RegionComplex, RegionId};

/// One cluster in a dendrogram.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub cluster: BTreeSet<RegionId>,
    pub height: Rational,
    /// Index of the immediate superset node, `None` for the root.
    pub parent: Option<usize>,
}

/// A cluster tree with heights: nested clusters, height non-increasing along
/// inclusion, each height the minimum level over the cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    nodes: Vec<TreeNode>,
}

impl Dendrogram {
    /// Wraps explicit nodes, validating the dendrogram laws.
    pub fn from_nodes(nodes: Vec<TreeNode>) -> Result<Self> {
        let tree = Dendrogram { nodes };
        tree.validate()?;
        Ok(tree)
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Index of the root node.
    pub fn root(&self) -> usize {
        self.nodes
            .iter()
            .position(|n| n.parent.is_none())
            .expect("validated dendrogram has a root")
    }

    pub fn children(&self, index: usize) -> Vec<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.parent == Some(index))
            .map(|(i, _)| i)
            .collect()
    }

    /// All region ids appearing in the tree.
    pub fn region_ids(&self) -> BTreeSet<RegionId> {
        self.nodes
            .iter()
            .flat_map(|n| n.cluster.iter().copied())
            .collect()
    }

    /// The clusters as a set of sets, for exact comparisons.
    pub fn cluster_set(&self) -> BTreeSet<BTreeSet<RegionId>> {
        self.nodes.iter().map(|n| n.cluster.clone()).collect()
    }

    /// Merge height of two regions: the height of the smallest cluster
    /// containing both, zero when no cluster does.
    pub fn merge_height(&self, i: RegionId, j: RegionId) -> Rational {
        let mut best: Option<&Rational> = None;
        for node in &self.nodes {
            if node.cluster.contains(&i) && node.cluster.contains(&j) {
                if best.map_or(true, |b| node.height > *b) {
                    best = Some(&node.height);
                }
            }
        }
        best.cloned().unwrap_or_else(Rational::zero)
    }

    /// Order-isomorphism of the cluster posets, ignoring heights and region
    /// labels.
    pub fn is_isomorphic(&self, other: &Dendrogram) -> bool {
        if self.is_empty() || other.is_empty() {
            return self.is_empty() == other.is_empty();
        }
        canonical_shape(self, self.root()) == canonical_shape(other, other.root())
    }

    /// Checks nesting, height monotonicity, strict-subset parent links, a
    /// single root, and positive heights.
    pub fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::MalformedTree("no nodes".into()));
        }
        let roots = self.nodes.iter().filter(|n| n.parent.is_none()).count();
        if roots != 1 {
            return Err(Error::MalformedTree(format!(
                "expected exactly one root, found {roots}"
            )));
        }
        for (idx, node) in self.nodes.iter().enumerate() {
            if node.cluster.is_empty() {
                return Err(Error::MalformedTree(format!("node {idx} is empty")));
            }
            if node.height <= Rational::zero() {
                return Err(Error::MalformedTree(format!(
                    "node {idx} has nonpositive height"
                )));
            }
            if let Some(p) = node.parent {
                let parent = self
                    .nodes
                    .get(p)
                    .ok_or_else(|| Error::MalformedTree(format!("node {idx} parent {p} missing")))?;
                if !node.cluster.is_subset(&parent.cluster) || node.cluster == parent.cluster {
                    return Err(Error::MalformedTree(format!(
                        "node {idx} is not a strict subset of its parent"
                    )));
                }
                if node.height < parent.height {
                    return Err(Error::MalformedTree(format!(
                        "node {idx} is lower than its parent"
                    )));
                }
            }
        }
        for (a, na) in self.nodes.iter().enumerate() {
            for nb in self.nodes.iter().skip(a + 1) {
                let disjoint = na.cluster.is_disjoint(&nb.cluster);
                let nested =
                    na.cluster.is_subset(&nb.cluster) || nb.cluster.is_subset(&na.cluster);
                if !disjoint && !nested {
                    return Err(Error::MalformedTree(
                        "clusters neither disjoint nor nested".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Canonical encoding of the rooted shape below `index` (AHU style).
fn canonical_shape(tree: &Dendrogram, index: usize) -> String {
    let mut parts: Vec<String> = tree
        .children(index)
        .into_iter()
        .map(|c| canonical_shape(tree, c))
        .collect();
    parts.sort();
    format!("({})", parts.join(""))
}

/// One dendrogram per connected component of the adjacency graph used.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    trees: Vec<Dendrogram>,
}

impl Forest {
    pub fn from_trees(trees: Vec<Dendrogram>) -> Result<Self> {
        let mut seen: BTreeSet<RegionId> = BTreeSet::new();
        for tree in &trees {
            tree.validate()?;
            for id in tree.region_ids() {
                if !seen.insert(id) {
                    return Err(Error::MalformedTree(format!(
                        "region {id} appears in two trees"
                    )));
                }
            }
        }
        Ok(Forest { trees })
    }

    pub fn from_tree(tree: Dendrogram) -> Self {
        Forest { trees: vec![tree] }
    }

    pub fn trees(&self) -> &[Dendrogram] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Which tree a region belongs to.
    pub fn component_of(&self, id: RegionId) -> Option<usize> {
        self.trees
            .iter()
            .position(|t| t.region_ids().contains(&id))
    }

    pub fn region_ids(&self) -> BTreeSet<RegionId> {
        self.trees.iter().flat_map(|t| t.region_ids()).collect()
    }

    pub fn cluster_set(&self) -> BTreeSet<BTreeSet<RegionId>> {
        self.trees.iter().flat_map(|t| t.cluster_set()).collect()
    }

    /// Merge height across the forest: zero for regions in different trees,
    /// since no cluster contains both.
    pub fn merge_height(&self, i: RegionId, j: RegionId) -> Rational {
        for tree in &self.trees {
            let ids = tree.region_ids();
            if ids.contains(&i) && ids.contains(&j) {
                return tree.merge_height(i, j);
            }
        }
        Rational::zero()
    }
}

/// Union-find over region indices that keeps member lists at the roots.
struct Components {
    parent: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Components {
    fn new(n: usize) -> Self {
        Components {
            parent: (0..n).collect(),
            members: (0..n).map(|i| vec![i]).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.members[ra].len() < self.members[rb].len() {
            std::mem::swap(&mut ra, &mut rb);
        }
        let moved = std::mem::take(&mut self.members[rb]);
        self.members[ra].extend(moved);
        self.parent[rb] = ra;
    }
}

/// Sweeps one connected component (given as region indices) and emits its
/// dendrogram.
fn sweep_component(
    complex: &RegionComplex,
    adjacency: Adjacency,
    member_indices: &[usize],
) -> Dendrogram {
    let regions = complex.regions();
    let lists = complex.adjacency_lists(adjacency);

    // Distinct levels, descending; equal levels form one batch so the
    // emitted cluster is the maximal one at that height.
    let mut levels: Vec<&Rational> = member_indices.iter().map(|&i| &regions[i].level).collect();
    levels.sort();
    levels.dedup();
    levels.reverse();

    let in_scope: BTreeSet<usize> = member_indices.iter().copied().collect();
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); levels.len()];
    for &i in member_indices {
        let pos = levels
            .binary_search_by(|l| regions[i].level.cmp(l))
            .expect("level present");
        by_level[pos].push(i);
    }

    let n = regions.len();
    let mut uf = Components::new(n);
    let mut active = vec![false; n];
    // Latest emitted node covering each region, if any.
    let mut last_node: Vec<Option<usize>> = vec![None; n];
    let mut nodes: Vec<TreeNode> = Vec::new();

    for (level_pos, batch) in by_level.iter().enumerate() {
        for &v in batch {
            active[v] = true;
        }
        for &v in batch {
            for &u in &lists[v] {
                if active[u] && in_scope.contains(&u) {
                    uf.union(v, u);
                }
            }
        }
        // Components that changed are exactly those holding a region
        // activated in this batch.
        let mut changed: Vec<usize> = batch.iter().map(|&v| uf.find(v)).collect();
        changed.sort_unstable();
        changed.dedup();
        // Deterministic emission order: by smallest region id in the cluster.
        changed.sort_by_key(|&root| {
            uf.members[root]
                .iter()
                .map(|&v| regions[v].id)
                .min()
                .expect("nonempty component")
        });
        for root in changed {
            let members = uf.members[root].clone();
            let cluster: BTreeSet<RegionId> = members.iter().map(|&v| regions[v].id).collect();
            let idx = nodes.len();
            nodes.push(TreeNode {
                cluster,
                height: levels[level_pos].clone(),
                parent: None,
            });
            let mut child_nodes: Vec<usize> = members.iter().filter_map(|&v| last_node[v]).collect();
            child_nodes.sort_unstable();
            child_nodes.dedup();
            for c in child_nodes {
                nodes[c].parent = Some(idx);
            }
            for &v in &members {
                last_node[v] = Some(idx);
            }
        }
    }

    let tree = Dendrogram { nodes };
    debug_assert!(tree.validate().is_ok());
    tree
}

/// Builds the dendrogram of a connected complex by a descending level sweep
/// over the chosen adjacency graph. Errors when the graph is disconnected;
/// use [`sweep_forest`] for those.
pub fn sweep_tree(complex: &RegionComplex, adjacency: Adjacency) -> Result<Dendrogram> {
    if complex.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let components = complex.components(adjacency);
    if components.len() != 1 {
        return Err(Error::DisconnectedSupport(
            adjacency.name(),
            components.len(),
        ));
    }
    Ok(sweep_component(complex, adjacency, &components[0]))
}

/// The finest cluster tree satisfying the three cluster axioms, computed as
/// the neighbor-graph sweep. Requires the complex to be in class F.
pub fn axiom_tree(complex: &RegionComplex) -> Result<Dendrogram> {
    let report = complex.classify();
    if !report.in_f {
        let why = report
            .witness
            .map(|w| w.to_string())
            .unwrap_or_else(|| "not in F".into());
        return Err(Error::NotInClassF(why));
    }
    sweep_tree(complex, Adjacency::Neighbor)
}

/// One sweep per connected component of the chosen adjacency graph.
pub fn sweep_forest(complex: &RegionComplex, adjacency: Adjacency) -> Result<Forest> {
    if complex.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let trees = complex
        .components(adjacency)
        .iter()
        .map(|comp| sweep_component(complex, adjacency, comp))
        .collect();
    Ok(Forest { trees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, Rational};
    use crate::regions::RegionComplex;

    fn pinch() -> RegionComplex {
        RegionComplex::from_abstract(
            vec![(1, ratio(3, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
            &[(1, 2), (1, 3), (2, 3)],
            &[(1, 3), (2, 3)],
        )
        .unwrap()
    }

    fn set(ids: &[RegionId]) -> BTreeSet<RegionId> {
        ids.iter().copied().collect()
    }

    fn heights_by_cluster(tree: &Dendrogram) -> Vec<(BTreeSet<RegionId>, Rational)> {
        tree.nodes()
            .iter()
            .map(|n| (n.cluster.clone(), n.height.clone()))
            .collect()
    }

    #[test]
    fn pinch_touch_sweep_chains_all_three() {
        let tree = sweep_tree(&pinch(), Adjacency::Touch).unwrap();
        assert_eq!(
            heights_by_cluster(&tree),
            vec![
                (set(&[1]), ratio(3, 1)),
                (set(&[1, 2]), ratio(2, 1)),
                (set(&[1, 2, 3]), ratio(1, 1)),
            ]
        );
    }

    #[test]
    fn pinch_neighbor_sweep_separates_the_peaks() {
        let tree = sweep_tree(&pinch(), Adjacency::Neighbor).unwrap();
        assert_eq!(
            heights_by_cluster(&tree),
            vec![
                (set(&[1]), ratio(3, 1)),
                (set(&[2]), ratio(2, 1)),
                (set(&[1, 2, 3]), ratio(1, 1)),
            ]
        );
        let root = tree.root();
        assert_eq!(tree.children(root).len(), 2);
    }

    #[test]
    fn axiom_tree_is_the_neighbor_sweep() {
        let complex = pinch();
        let tree = axiom_tree(&complex).unwrap();
        assert_eq!(
            tree.cluster_set(),
            sweep_tree(&complex, Adjacency::Neighbor)
                .unwrap()
                .cluster_set()
        );
    }

    #[test]
    fn axiom_tree_requires_class_f() {
        let c = RegionComplex::from_abstract(
            vec![(1, ratio(1, 1)), (2, ratio(1, 1))],
            &[],
            &[],
        )
        .unwrap();
        assert!(matches!(axiom_tree(&c), Err(Error::NotInClassF(_))));
    }

    #[test]
    fn single_region_tree() {
        let c = RegionComplex::from_abstract(vec![(7, ratio(5, 1))], &[], &[]).unwrap();
        let tree = sweep_tree(&c, Adjacency::Touch).unwrap();
        assert_eq!(heights_by_cluster(&tree), vec![(set(&[7]), ratio(5, 1))]);
    }

    #[test]
    fn empty_complex_is_rejected() {
        let c = RegionComplex::from_abstract(vec![], &[], &[]).unwrap();
        assert!(matches!(
            sweep_tree(&c, Adjacency::Touch),
            Err(Error::EmptyComplex)
        ));
        assert!(matches!(
            sweep_forest(&c, Adjacency::Touch),
            Err(Error::EmptyComplex)
        ));
    }

    #[test]
    fn disconnected_complex_directs_to_forest() {
        let c = RegionComplex::from_abstract(
            vec![(1, ratio(1, 1)), (2, ratio(2, 1))],
            &[],
            &[],
        )
        .unwrap();
        assert!(matches!(
            sweep_tree(&c, Adjacency::Touch),
            Err(Error::DisconnectedSupport("touch", 2))
        ));
        let forest = sweep_forest(&c, Adjacency::Touch).unwrap();
        assert_eq!(forest.len(), 2);
    }

    #[test]
    fn forest_of_connected_complex_is_one_tree() {
        let complex = pinch();
        let forest = sweep_forest(&complex, Adjacency::Neighbor).unwrap();
        assert_eq!(forest.len(), 1);
        assert_eq!(
            forest.trees()[0].cluster_set(),
            sweep_tree(&complex, Adjacency::Neighbor)
                .unwrap()
                .cluster_set()
        );
    }

    #[test]
    fn equal_levels_form_one_batch() {
        // Two adjacent regions at the same level come out as one cluster.
        let c = RegionComplex::from_abstract(
            vec![(1, ratio(2, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
            &[(1, 2), (2, 3)],
            &[(1, 2), (2, 3)],
        )
        .unwrap();
        let tree = sweep_tree(&c, Adjacency::Neighbor).unwrap();
        assert_eq!(
            heights_by_cluster(&tree),
            vec![
                (set(&[1, 2]), ratio(2, 1)),
                (set(&[1, 2, 3]), ratio(1, 1)),
            ]
        );
    }

    #[test]
    fn equal_levels_apart_make_separate_clusters() {
        let c = RegionComplex::from_abstract(
            vec![(1, ratio(2, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
            &[(1, 3), (2, 3)],
            &[(1, 3), (2, 3)],
        )
        .unwrap();
        let tree = sweep_tree(&c, Adjacency::Neighbor).unwrap();
        assert_eq!(
            heights_by_cluster(&tree),
            vec![
                (set(&[1]), ratio(2, 1)),
                (set(&[2]), ratio(2, 1)),
                (set(&[1, 2, 3]), ratio(1, 1)),
            ]
        );
    }

    #[test]
    fn persisting_component_is_emitted_once() {
        // Region 1 stays its own component across levels 3 and 2; it must
        // appear once, at height 3.
        let c = RegionComplex::from_abstract(
            vec![(1, ratio(3, 1)), (2, ratio(2, 1)), (3, ratio(1, 1))],
            &[(1, 3), (2, 3)],
            &[(1, 3), (2, 3)],
        )
        .unwrap();
        let tree = sweep_tree(&c, Adjacency::Neighbor).unwrap();
        let clusters: Vec<_> = tree.nodes().iter().map(|n| n.cluster.clone()).collect();
        assert_eq!(
            clusters,
            vec![set(&[1]), set(&[2]), set(&[1, 2, 3])]
        );
    }

    #[test]
    fn heights_equal_min_level_over_cluster() {
        let complex = pinch();
        for adjacency in [Adjacency::Touch, Adjacency::Neighbor] {
            let tree = sweep_tree(&complex, adjacency).unwrap();
            for node in tree.nodes() {
                let min = node
                    .cluster
                    .iter()
                    .map(|&id| complex.level(id).unwrap().clone())
                    .min()
                    .unwrap();
                assert_eq!(node.height, min);
            }
        }
    }

    #[test]
    fn level_scaling_equivariance() {
        let complex = pinch();
        let scaled = complex.scale_levels(&ratio(5, 3)).unwrap();
        let t1 = sweep_tree(&complex, Adjacency::Neighbor).unwrap();
        let t2 = sweep_tree(&scaled, Adjacency::Neighbor).unwrap();
        assert_eq!(t1.cluster_set(), t2.cluster_set());
        for (a, b) in t1.nodes().iter().zip(t2.nodes()) {
            assert_eq!(&a.height * ratio(5, 3), b.height);
        }
    }

    #[test]
    fn isomorphism_ignores_labels_but_sees_shape() {
        let t1 = sweep_tree(&pinch(), Adjacency::Touch).unwrap();
        let t2 = sweep_tree(&pinch(), Adjacency::Neighbor).unwrap();
        assert!(!t1.is_isomorphic(&t2));
        let relabeled = RegionComplex::from_abstract(
            vec![(10, ratio(3, 1)), (20, ratio(2, 1)), (30, ratio(1, 1))],
            &[(10, 20), (10, 30), (20, 30)],
            &[(10, 30), (20, 30)],
        )
        .unwrap();
        let t3 = sweep_tree(&relabeled, Adjacency::Neighbor).unwrap();
        assert!(t2.is_isomorphic(&t3));
    }

    #[test]
    fn from_nodes_validates() {
        assert!(Dendrogram::from_nodes(vec![]).is_err());
        // Overlapping, non-nested clusters are rejected.
        let bad = vec![
            TreeNode {
                cluster: set(&[1, 2]),
                height: ratio(1, 1),
                parent: None,
            },
            TreeNode {
                cluster: set(&[2, 3]),
                height: ratio(1, 1),
                parent: Some(0),
            },
        ];
        assert!(Dendrogram::from_nodes(bad).is_err());
    }
}
