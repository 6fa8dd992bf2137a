//! JSON schemas for complexes, trees, densities, and reports.
//!
//! Artifacts carry `"schema": "v1"`. Levels and heights are emitted as JSON
//! numbers for interoperability plus an exact `p/q` string so round trips
//! through the exact types are lossless; on input, the exact form wins when
//! present.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::density::{DensitySpec, MixtureFamily};
use crate::error::{Error, Result};
use crate::grid::{CellId, ShiftedGrid};
use crate::rational::{parse_rational, rational_from_f64, rational_to_f64, Rational};
use crate::regions::{RegionComplex, RegionId};
use crate::tree::{Dendrogram, Forest, TreeNode};

pub const SCHEMA_VERSION: &str = "v1";

fn check_schema(schema: &Option<String>) -> Result<()> {
    match schema {
        None => Ok(()),
        Some(v) if v == SCHEMA_VERSION => Ok(()),
        Some(v) => Err(Error::Schema(format!(
            "unsupported schema version {v:?}, expected {SCHEMA_VERSION:?}"
        ))),
    }
}

fn level_from(value: f64, exact: &Option<String>) -> Result<Rational> {
    match exact {
        Some(s) => parse_rational(s),
        None => rational_from_f64(value),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CellDoc {
    anchor: Vec<f64>,
    level: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_exact: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RegionDoc {
    id: RegionId,
    level: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_exact: Option<String>,
}

/// A complex is given either by grid cells or abstractly by regions plus
/// the two edge lists.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ComplexDoc {
    Cells {
        #[serde(skip_serializing_if = "Option::is_none")]
        schema: Option<String>,
        dim: usize,
        scale: f64,
        cells: Vec<CellDoc>,
    },
    Abstract {
        #[serde(skip_serializing_if = "Option::is_none")]
        schema: Option<String>,
        regions: Vec<RegionDoc>,
        touch: Vec<(RegionId, RegionId)>,
        neighbor: Vec<(RegionId, RegionId)>,
    },
}

/// Serializes a complex; cell-backed complexes keep their geometry,
/// abstract ones their edge lists.
pub fn complex_to_json(complex: &RegionComplex) -> Result<String> {
    let doc = if let Some(grid) = complex.grid() {
        let mut cells = Vec::new();
        for region in complex.regions() {
            for cell in &region.cells {
                cells.push(CellDoc {
                    anchor: cell.coords(),
                    level: rational_to_f64(&region.level),
                    level_exact: Some(region.level.to_string()),
                });
            }
        }
        ComplexDoc::Cells {
            schema: Some(SCHEMA_VERSION.into()),
            dim: grid.dim(),
            scale: grid.scale(),
            cells,
        }
    } else {
        ComplexDoc::Abstract {
            schema: Some(SCHEMA_VERSION.into()),
            regions: complex
                .regions()
                .iter()
                .map(|r| RegionDoc {
                    id: r.id,
                    level: rational_to_f64(&r.level),
                    level_exact: Some(r.level.to_string()),
                })
                .collect(),
            touch: complex
                .edges(crate::regions::Adjacency::Touch)
                .iter()
                .copied()
                .collect(),
            neighbor: complex
                .edges(crate::regions::Adjacency::Neighbor)
                .iter()
                .copied()
                .collect(),
        }
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parses a complex from either form. Multi-cell regions are not part of
/// the cell schema; each cell is one region, matching the builder.
pub fn complex_from_json(json: &str) -> Result<RegionComplex> {
    let doc: ComplexDoc = serde_json::from_str(json)?;
    match doc {
        ComplexDoc::Cells {
            schema,
            dim,
            scale,
            cells,
        } => {
            check_schema(&schema)?;
            let grid = ShiftedGrid::new(dim, scale)?;
            let cells = cells
                .into_iter()
                .map(|c| {
                    if c.anchor.len() != dim {
                        return Err(Error::DimensionMismatch {
                            expected: dim,
                            got: c.anchor.len(),
                        });
                    }
                    Ok((
                        CellId::from_coords(&c.anchor)?,
                        level_from(c.level, &c.level_exact)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            RegionComplex::from_cells(cells, grid)
        }
        ComplexDoc::Abstract {
            schema,
            regions,
            touch,
            neighbor,
        } => {
            check_schema(&schema)?;
            let regions = regions
                .into_iter()
                .map(|r| Ok((r.id, level_from(r.level, &r.level_exact)?)))
                .collect::<Result<Vec<_>>>()?;
            RegionComplex::from_abstract(regions, &touch, &neighbor)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeDoc {
    id: usize,
    regions: Vec<RegionId>,
    height: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    height_exact: Option<String>,
    parent: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    nodes: Vec<NodeDoc>,
}

fn tree_nodes_to_docs(tree: &Dendrogram, offset: usize) -> Vec<NodeDoc> {
    tree.nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| NodeDoc {
            id: offset + i,
            regions: n.cluster.iter().copied().collect(),
            height: rational_to_f64(&n.height),
            height_exact: Some(n.height.to_string()),
            parent: n.parent.map(|p| offset + p),
        })
        .collect()
}

/// Serializes a dendrogram; node ids are positional.
pub fn tree_to_json(tree: &Dendrogram) -> Result<String> {
    let doc = TreeDoc {
        schema: Some(SCHEMA_VERSION.into()),
        nodes: tree_nodes_to_docs(tree, 0),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Serializes a forest as one node list with several roots.
pub fn forest_to_json(forest: &Forest) -> Result<String> {
    let mut nodes = Vec::new();
    for tree in forest.trees() {
        let offset = nodes.len();
        nodes.extend(tree_nodes_to_docs(tree, offset));
    }
    let doc = TreeDoc {
        schema: Some(SCHEMA_VERSION.into()),
        nodes,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn nodes_from_docs(docs: Vec<NodeDoc>) -> Result<Vec<TreeNode>> {
    let n = docs.len();
    let mut nodes = Vec::with_capacity(n);
    for (pos, doc) in docs.into_iter().enumerate() {
        if doc.id != pos {
            return Err(Error::Schema(format!(
                "node ids must be positional: found {} at position {pos}",
                doc.id
            )));
        }
        if let Some(p) = doc.parent {
            if p >= n {
                return Err(Error::Schema(format!("parent {p} out of range")));
            }
        }
        nodes.push(TreeNode {
            cluster: doc.regions.iter().copied().collect::<BTreeSet<_>>(),
            height: level_from(doc.height, &doc.height_exact)?,
            parent: doc.parent,
        });
    }
    Ok(nodes)
}

/// Parses a single-root tree.
pub fn tree_from_json(json: &str) -> Result<Dendrogram> {
    let doc: TreeDoc = serde_json::from_str(json)?;
    check_schema(&doc.schema)?;
    Dendrogram::from_nodes(nodes_from_docs(doc.nodes)?)
}

/// Parses a tree or multi-root forest from the same node schema.
pub fn forest_from_json(json: &str) -> Result<Forest> {
    let doc: TreeDoc = serde_json::from_str(json)?;
    check_schema(&doc.schema)?;
    let nodes = nodes_from_docs(doc.nodes)?;

    // Split nodes by the root they reach.
    let n = nodes.len();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let mut v = i;
        let mut hops = 0;
        while let Some(p) = nodes[v].parent {
            v = p;
            hops += 1;
            if hops > n {
                return Err(Error::Schema("parent links form a cycle".into()));
            }
        }
        root_of[i] = v;
    }
    let mut roots: Vec<usize> = root_of.to_vec();
    roots.sort_unstable();
    roots.dedup();

    let mut trees = Vec::with_capacity(roots.len());
    for &root in &roots {
        let members: Vec<usize> = (0..n).filter(|&i| root_of[i] == root).collect();
        let position: std::collections::HashMap<usize, usize> = members
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let tree_nodes: Vec<TreeNode> = members
            .iter()
            .map(|&old| TreeNode {
                cluster: nodes[old].cluster.clone(),
                height: nodes[old].height.clone(),
                parent: nodes[old].parent.map(|p| position[&p]),
            })
            .collect();
        trees.push(Dendrogram::from_nodes(tree_nodes)?);
    }
    Forest::from_trees(trees)
}

/// DOT rendering of a dendrogram: one node per cluster, parent-to-child
/// edges labeled with the child's height.
pub fn tree_to_dot(tree: &Dendrogram) -> String {
    forest_to_dot_impl(std::slice::from_ref(tree))
}

/// DOT rendering of a forest.
pub fn forest_to_dot(forest: &Forest) -> String {
    forest_to_dot_impl(forest.trees())
}

fn forest_to_dot_impl(trees: &[Dendrogram]) -> String {
    let mut out = String::from("digraph dendrogram {\n  rankdir=BT;\n");
    let mut offset = 0;
    for tree in trees {
        for (i, node) in tree.nodes().iter().enumerate() {
            let regions: Vec<String> = node.cluster.iter().map(|id| id.to_string()).collect();
            out.push_str(&format!(
                "  n{} [label=\"{{{}}} @ {}\"];\n",
                offset + i,
                regions.join(","),
                node.height
            ));
        }
        for (i, node) in tree.nodes().iter().enumerate() {
            if let Some(p) = node.parent {
                out.push_str(&format!(
                    "  n{} -> n{} [label=\"{}\"];\n",
                    offset + p,
                    offset + i,
                    node.height
                ));
            }
        }
        offset += tree.len();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum FamilyDoc {
    GaussianMixture {
        weights: Vec<f64>,
        means: Vec<Vec<f64>>,
        scales: Vec<f64>,
    },
    BoxMixture {
        weights: Vec<f64>,
        boxes: Vec<(Vec<f64>, Vec<f64>)>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct DensityDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    schema: Option<String>,
    dim: usize,
    #[serde(flatten)]
    family: FamilyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    lipschitz_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    modes: Option<Vec<Vec<f64>>>,
}

/// Serializes a density spec. The Lipschitz bound is included only when it
/// differs from the family's own certified bound.
pub fn density_to_json(spec: &DensitySpec) -> Result<String> {
    let family = match spec.family() {
        MixtureFamily::GaussianMixture {
            weights,
            means,
            scales,
        } => FamilyDoc::GaussianMixture {
            weights: weights.clone(),
            means: means.clone(),
            scales: scales.clone(),
        },
        MixtureFamily::BoxMixture { weights, boxes } => FamilyDoc::BoxMixture {
            weights: weights.clone(),
            boxes: boxes.clone(),
        },
    };
    let default_bound = rebuild_default(spec)?.lipschitz_bound();
    let doc = DensityDoc {
        schema: Some(SCHEMA_VERSION.into()),
        dim: spec.dim(),
        family,
        lipschitz_bound: if spec.lipschitz_bound() == default_bound {
            None
        } else {
            Some(spec.lipschitz_bound())
        },
        modes: spec.modes().map(|m| m.to_vec()),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

fn rebuild_default(spec: &DensitySpec) -> Result<DensitySpec> {
    match spec.family() {
        MixtureFamily::GaussianMixture {
            weights,
            means,
            scales,
        } => DensitySpec::gaussian_mixture(
            spec.dim(),
            weights.clone(),
            means.clone(),
            scales.clone(),
        ),
        MixtureFamily::BoxMixture { weights, boxes } => {
            DensitySpec::box_mixture(spec.dim(), weights.clone(), boxes.clone())
        }
    }
}

/// Parses a density spec.
pub fn density_from_json(json: &str) -> Result<DensitySpec> {
    let doc: DensityDoc = serde_json::from_str(json)?;
    check_schema(&doc.schema)?;
    let mut spec = match doc.family {
        FamilyDoc::GaussianMixture {
            weights,
            means,
            scales,
        } => DensitySpec::gaussian_mixture(doc.dim, weights, means, scales)?,
        FamilyDoc::BoxMixture { weights, boxes } => {
            DensitySpec::box_mixture(doc.dim, weights, boxes)?
        }
    };
    if let Some(bound) = doc.lipschitz_bound {
        spec = spec.with_lipschitz_bound(bound);
    }
    if let Some(modes) = doc.modes {
        spec = spec.with_modes(modes);
    }
    Ok(spec)
}

/// Candidate clusters for the verification mode.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClustersDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub clusters: Vec<Vec<RegionId>>,
}

pub fn clusters_from_json(json: &str) -> Result<Vec<BTreeSet<RegionId>>> {
    let doc: ClustersDoc = serde_json::from_str(json)?;
    check_schema(&doc.schema)?;
    Ok(doc
        .clusters
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        bimodal_mixture_1d, pinch_complex, step_chain_complex, step_chain_tree,
        step_chain_tree_decorated,
    };
    use crate::rational::ratio;
    use crate::regions::Adjacency;
    use crate::tree::{sweep_forest, sweep_tree};

    #[test]
    fn complex_round_trips_both_forms() {
        for complex in [step_chain_complex(), pinch_complex()] {
            let json = complex_to_json(&complex).unwrap();
            let back = complex_from_json(&json).unwrap();
            assert_eq!(back, complex);
        }
    }

    #[test]
    fn cells_form_keeps_exact_levels() {
        let complex = step_chain_complex();
        let json = complex_to_json(&complex).unwrap();
        let back = complex_from_json(&json).unwrap();
        // 1/3 is not a float; the exact field preserves it.
        assert_eq!(*back.level(1).unwrap(), ratio(1, 3));
    }

    #[test]
    fn plain_float_levels_parse_without_exact_field() {
        let json = r#"{"dim":1,"scale":1.0,"cells":[{"anchor":[0],"level":0.5}]}"#;
        let complex = complex_from_json(json).unwrap();
        assert_eq!(*complex.level(0).unwrap(), ratio(1, 2));
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let json = r#"{"schema":"v2","regions":[{"id":1,"level":1.0}],"touch":[],"neighbor":[]}"#;
        assert!(matches!(complex_from_json(json), Err(Error::Schema(_))));
    }

    #[test]
    fn tree_round_trips_exactly() {
        for tree in [step_chain_tree(), step_chain_tree_decorated()] {
            let json = tree_to_json(&tree).unwrap();
            let back = tree_from_json(&json).unwrap();
            assert_eq!(back, tree);
        }
    }

    #[test]
    fn forest_round_trips() {
        let complex = crate::fixtures::scattered_blobs(4);
        let forest = sweep_forest(&complex, Adjacency::Neighbor).unwrap();
        let json = forest_to_json(&forest).unwrap();
        let back = forest_from_json(&json).unwrap();
        assert_eq!(back.len(), forest.len());
        assert_eq!(back.cluster_set(), forest.cluster_set());
        // A single tree parses as a one-tree forest.
        let single = forest_from_json(&tree_to_json(&step_chain_tree()).unwrap()).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn dot_renders_nodes_and_edges() {
        let tree = sweep_tree(&pinch_complex(), Adjacency::Neighbor).unwrap();
        let dot = tree_to_dot(&tree);
        assert_eq!(dot.matches("label=\"{").count(), 3);
        assert_eq!(dot.matches(" -> ").count(), 2);
    }

    #[test]
    fn density_round_trips() {
        let spec = bimodal_mixture_1d();
        let json = density_to_json(&spec).unwrap();
        let back = density_from_json(&json).unwrap();
        assert_eq!(back, spec);
        // Overridden bound survives.
        let spec = spec.with_lipschitz_bound(0.25);
        let back = density_from_json(&density_to_json(&spec).unwrap()).unwrap();
        assert_eq!(back.lipschitz_bound(), 0.25);
    }

    #[test]
    fn density_schema_fields_are_bit_exact() {
        let json = density_to_json(&bimodal_mixture_1d()).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["family"], "gaussian_mixture");
        assert!(value["weights"].is_array());
        assert!(value["means"].is_array());
        assert!(value["scales"].is_array());
        assert_eq!(value["dim"], 1);
    }

    #[test]
    fn clusters_parse() {
        let sets =
            clusters_from_json(r#"{"clusters":[[1,2],[3]]}"#).unwrap();
        assert_eq!(sets.len(), 2);
        assert!(sets[0].contains(&1) && sets[0].contains(&2));
    }
}
