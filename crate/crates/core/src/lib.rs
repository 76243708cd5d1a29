//! Static hypergraph representation and the combinatorial machinery built on it:
//! degrees and pair degrees, the primal graph, the induced pair multigraph,
//! restrictions and density measures, triangle canonicalization and
//! classification, seeded random generators, the `(owner, port)` edge-ID
//! scheme, and a centralized reference peeling decomposition.
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

pub mod combin;
pub mod density;
pub mod error;
pub mod generate;
pub mod hypergraph;
pub mod ids;
pub mod io;
pub mod layering;
pub mod triangle;

pub use density::{density, max_density_exact, Rational, DEFAULT_DENSITY_CAP};
pub use error::CoreError;
pub use generate::{sample_sparse_planted, sample_uniform_random, GenMeta};
pub use hypergraph::{Hypergraph, PairMatrix};
pub use ids::{EdgeId, VertexId};
pub use layering::{layered_decomposition_reference, LayerDecomposition, LayerError};
pub use triangle::{classify_triangle, Triangle, TriangleClass};
