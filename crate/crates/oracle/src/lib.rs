//! Ground-truth machinery for triangle enumeration: a brute-force
//! enumerator over vertex triples, an independent count through traces of
//! the induced multigraph's adjacency matrix, and exact-arithmetic checks of
//! the edge/triangle inequalities those traces satisfy.

pub mod bounds;
pub mod enumerate;
pub mod trace;

pub use bounds::{check_edge_bounds, expected_triangle_bounds, BoundReport};
pub use enumerate::{enumerate_bruteforce, is_delta_light, TriangleSet};
pub use trace::{count_via_trace, trace_squared, TraceError};
