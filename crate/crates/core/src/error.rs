use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("edge {edge} has cardinality {len}, need at least 2")]
    EdgeTooSmall { edge: usize, len: usize },
    #[error("edge {edge} contains duplicate vertex {vertex}")]
    DuplicateVertex { edge: usize, vertex: usize },
    #[error("edge {edge} contains vertex {vertex} outside [0, {n})")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("subset contains vertex {vertex} outside [0, {n})")]
    SubsetOutOfRange { vertex: usize, n: usize },
    #[error("pair degree requires two distinct vertices, got {0} twice")]
    PairOfEqualVertices(usize),
    #[error("edge index {edge} out of range ({m} edges)")]
    EdgeIndexOutOfRange { edge: usize, m: usize },
    #[error("exact maximum density is capped at n <= {cap}, got n = {n}")]
    DensityCapExceeded { n: usize, cap: usize },
    #[error("triangle violates incidence: vertex {vertex} not in edge {edge}")]
    IncidenceViolation { vertex: usize, edge: usize },
    #[error("triangle vertices must be pairwise distinct")]
    RepeatedTriangleVertex,
    #[error("invalid generator parameters: {0}")]
    BadGeneratorParams(String),
}
