//! The information a vertex starts with.

use hypersim_core::{Hypergraph, VertexId};

use crate::model::{Bandwidth, ModelKind};

/// Initial-knowledge level. Under `Kt1` (the default) a vertex knows the
/// member list of every incident edge; under `Kt0` only its ports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KtLevel {
    Kt0,
    #[default]
    Kt1,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortInfo {
    /// Sorted member list of the edge behind this port; withheld under KT0.
    pub members: Option<Vec<VertexId>>,
}

/// Per-vertex static view handed to programs. Vertex count, rank, model, and
/// bandwidth are global knowledge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalView {
    pub vertex: VertexId,
    pub n: usize,
    pub rank: usize,
    pub model: ModelKind,
    pub bandwidth: Bandwidth,
    pub kt: KtLevel,
    pub ports: Vec<PortInfo>,
}

impl LocalView {
    pub fn build(h: &Hypergraph, v: VertexId, model: ModelKind, bw: Bandwidth, kt: KtLevel) -> Self {
        let ports = h
            .incident(v)
            .iter()
            .map(|&e| PortInfo {
                members: match kt {
                    KtLevel::Kt0 => None,
                    KtLevel::Kt1 => Some(h.edge(e).to_vec()),
                },
            })
            .collect();
        LocalView {
            vertex: v,
            n: h.n(),
            rank: h.rank(),
            model,
            bandwidth: bw,
            kt,
            ports,
        }
    }

    pub fn degree(&self) -> usize {
        self.ports.len()
    }

    /// Members of the edge behind `port` (KT1 only).
    pub fn members(&self, port: usize) -> &[VertexId] {
        self.ports[port]
            .members
            .as_deref()
            .expect("member lists require KT1")
    }

    /// Co-members of the edge behind `port`, ascending.
    pub fn others(&self, port: usize) -> Vec<VertexId> {
        self.members(port)
            .iter()
            .copied()
            .filter(|&w| w != self.vertex)
            .collect()
    }

    /// My ports whose edges contain `w`, in port order. Ports follow global
    /// edge order on every vertex, so two endpoints of a shared edge
    /// enumerate their shared edges identically; the position in this list
    /// is a consistent ordinal for the edge.
    pub fn shared_ports_with(&self, w: VertexId) -> Vec<usize> {
        (0..self.degree())
            .filter(|&p| self.members(p).contains(&w))
            .collect()
    }
}
