//! The seven communication models and the bandwidth parameter.

use std::fmt;

use hypersim_core::combin::ceil_log2;
use hypersim_core::Hypergraph;

/// Which synchronous model governs a run. Each value implies a distinct
/// outbox-validity predicate:
///
/// * `Clique`  — any vertex may message any other, one message per ordered pair.
/// * `Pc`      — CONGEST on the primal graph: one message per neighbor.
/// * `Ec`      — per incident edge, distinct messages to each co-member.
/// * `Eb`      — per incident edge, one broadcast to the whole edge.
/// * `Eu`      — per incident edge, one unicast to a chosen co-member.
/// * `Es`      — per edge, a single vertex broadcasts (min-ID arbitration).
/// * `Ep`      — per edge, a single vertex pair exchanges messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelKind {
    Clique,
    Pc,
    Ec,
    Eb,
    Eu,
    Es,
    Ep,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] = [
        ModelKind::Clique,
        ModelKind::Pc,
        ModelKind::Ec,
        ModelKind::Eb,
        ModelKind::Eu,
        ModelKind::Es,
        ModelKind::Ep,
    ];

    /// Aggregate bits deliverable per round: the number of usable message
    /// slots times the bandwidth.
    pub fn capacity_per_round(self, h: &Hypergraph, bw: Bandwidth) -> u128 {
        let slots: u128 = match self {
            ModelKind::Clique => (h.n() as u128) * (h.n().saturating_sub(1) as u128),
            ModelKind::Pc => 2 * h.primal_edge_count() as u128,
            ModelKind::Ec => h
                .edges()
                .iter()
                .map(|e| (e.len() * (e.len() - 1)) as u128)
                .sum(),
            ModelKind::Eb => h.edges().iter().map(|e| e.len() as u128).sum(),
            ModelKind::Eu => (0..h.n())
                .map(|v| h.degree(hypersim_core::VertexId(v)) as u128)
                .sum(),
            ModelKind::Es => h.m() as u128,
            ModelKind::Ep => 2 * h.m() as u128,
        };
        slots * bw.bits() as u128
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModelKind::Clique => "CLIQUE",
            ModelKind::Pc => "PC",
            ModelKind::Ec => "EC",
            ModelKind::Eb => "EB",
            ModelKind::Eu => "EU",
            ModelKind::Es => "ES",
            ModelKind::Ep => "EP",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "CLIQUE" => Ok(ModelKind::Clique),
            "PC" => Ok(ModelKind::Pc),
            "EC" => Ok(ModelKind::Ec),
            "EB" => Ok(ModelKind::Eb),
            "EU" => Ok(ModelKind::Eu),
            "ES" => Ok(ModelKind::Es),
            "EP" => Ok(ModelKind::Ep),
            other => Err(format!("unknown model '{other}'")),
        }
    }
}

/// Bits per message slot per round. Must be at least `ceil(log2 n)` so one
/// vertex ID fits in a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bandwidth(u64);

impl Bandwidth {
    pub fn new(bits: u64) -> Self {
        Bandwidth(bits.max(1))
    }

    /// Default `4 * ceil(log2(n + 1))` bits.
    pub fn default_for(n: usize) -> Self {
        Bandwidth(4 * ceil_log2(n + 1).max(1) as u64)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn accommodates(self, n: usize) -> bool {
        self.0 >= ceil_log2(n) as u64
    }
}
