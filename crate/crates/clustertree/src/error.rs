//! Crate-wide error type.

use thiserror::Error;

use crate::regions::RegionId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid grid parameter: {0}")]
    InvalidGrid(String),

    #[error("anchor {0:?} (in lattice units) is not a lattice point")]
    InvalidAnchor(Vec<i64>),

    #[error("coordinate {value} is not an exact multiple of 2^-({dim}-1)")]
    NotDyadic { value: f64, dim: usize },

    #[error("duplicate cell at anchor {0:?} (in lattice units)")]
    DuplicateCell(Vec<i64>),

    #[error("duplicate region id {0}")]
    DuplicateRegion(RegionId),

    #[error("region {0} has nonpositive level")]
    NonpositiveLevel(RegionId),

    #[error("neighbor edge ({0}, {1}) has no matching touch edge")]
    NeighborWithoutTouch(RegionId, RegionId),

    #[error("edge ({0}, {1}) is invalid: {2}")]
    InvalidEdge(RegionId, RegionId, &'static str),

    #[error("unknown region id {0}")]
    UnknownRegion(RegionId),

    #[error("cluster is empty")]
    EmptyCluster,

    #[error("complex has no geometry; point queries are unavailable")]
    MissingGeometry,

    #[error("complex is empty")]
    EmptyComplex,

    #[error("{0} graph is disconnected ({1} components); use a forest sweep instead")]
    DisconnectedSupport(&'static str, usize),

    #[error("density is not in class F: {0}")]
    NotInClassF(String),

    #[error("complex has {0} regions, above the enumeration cap of {1}")]
    TooManyRegions(usize, usize),

    #[error("trees are over mismatched region sets")]
    MismatchedComplexes,

    #[error("dendrogram is malformed: {0}")]
    MalformedTree(String),

    #[error("no cell reaches the threshold {0}; support is empty")]
    EmptySupport(f64),

    #[error("discretization produced {0} cells, above the cap of {1}")]
    ExcessiveCells(usize, usize),

    #[error("invalid density parameter: {0}")]
    InvalidDensity(String),

    #[error("the tree never splits; density appears unimodal at this resolution")]
    NoSplit,

    #[error("no exact merge-height oracle is available for dimension {0}")]
    TruthOracleUnavailable(usize),

    #[error("invalid number: {0}")]
    InvalidNumber(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
