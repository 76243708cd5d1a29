//! Distributed triangle-enumeration algorithms, expressed as per-vertex
//! programs for the round engine:
//!
//! * `clique`         — partition all vertex triples by base-s digits, ship
//!                      pair bit-vectors through the CLIQUE router;
//! * `bounded-degree` — everyone broadcasts incident edge IDs, O(Δ) rounds;
//! * `light`          — low-degree vertices broadcast their 1-neighborhood;
//! * `peel`           — layered-decomposition protocols (peel, parallel
//!                      peel, flood) for everywhere-sparse hypergraphs;
//! * `density`        — the full pipeline: estimate density locally, peel,
//!                      broadcast surviving edges, O(μ·r + log n) rounds.

pub mod bounded;
pub mod clique;
pub mod common;
pub mod density_enum;
pub mod light;
pub mod partition;
pub mod peel;

pub use bounded::bounded_degree_enumerate;
pub use clique::{clique_enumerate, CliqueRun};
pub use common::{AlgoModel, EnumerationRun};
pub use density_enum::density_enumerate;
pub use light::light_triangle_enumerate;
pub use partition::{destination_indices_raw, destination_set, TriplePartition};
pub use peel::{flood, nonuniform_peel, parallel_peel, peel, PeelOutcome, Threshold};
