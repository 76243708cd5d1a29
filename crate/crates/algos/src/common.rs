//! Shared plumbing: the edge-broadcast program shape and its adapters onto
//! the EB and PC models, wire types, and result containers.

use std::collections::BTreeSet;

use hypersim_core::combin::id_bits;
use hypersim_core::{EdgeId, Hypergraph, Triangle, TriangleClass, VertexId};
use hypersim_kernel::{
    Inbox, LocalView, Metrics, ModelKind, NodeProgram, Outbox, Payload, SendIntent, Via,
};

/// Model an edge-broadcast algorithm runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoModel {
    Eb,
    Pc,
}

impl AlgoModel {
    pub fn kind(self) -> ModelKind {
        match self {
            AlgoModel::Eb => ModelKind::Eb,
            AlgoModel::Pc => ModelKind::Pc,
        }
    }
}

/// Per-vertex outputs of an enumeration run plus the engine's accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationRun {
    pub class: TriangleClass,
    pub per_vertex: Vec<BTreeSet<Triangle>>,
    pub metrics: Metrics,
}

impl EnumerationRun {
    pub fn union(&self) -> BTreeSet<Triangle> {
        self.per_vertex.iter().flatten().copied().collect()
    }

    pub fn total(&self) -> usize {
        self.per_vertex.iter().map(BTreeSet::len).sum()
    }

    /// Outputs are pairwise disjoint iff no triangle is claimed twice.
    pub fn disjoint(&self) -> bool {
        self.union().len() == self.total()
    }
}

/// Edge ID on the wire: `(owner, owner's port)`, two ID-sized fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeIdWire {
    pub owner: VertexId,
    pub port: u32,
    pub width: u8,
}

impl EdgeIdWire {
    pub fn to_edge_id(self) -> EdgeId {
        EdgeId {
            owner: self.owner,
            port: self.port as usize,
        }
    }
}

impl Payload for EdgeIdWire {
    fn bit_len(&self) -> u64 {
        2 * self.width as u64
    }
}

/// Maps `(owner, port)` IDs back to global edge indices.
pub struct EdgeIdIndex {
    map: std::collections::BTreeMap<(VertexId, usize), usize>,
}

impl EdgeIdIndex {
    pub fn new(h: &Hypergraph) -> Self {
        let map = h
            .assign_edge_ids()
            .into_iter()
            .enumerate()
            .map(|(idx, id)| ((id.owner, id.port), idx))
            .collect();
        EdgeIdIndex { map }
    }

    pub fn index_of(&self, id: EdgeIdWire) -> Option<usize> {
        self.map.get(&(id.owner, id.port as usize)).copied()
    }
}

/// A triangle reported by a program in wire terms; the runner resolves edge
/// IDs to indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IdTriangle {
    pub vertices: [VertexId; 3],
    pub edges: [EdgeIdWire; 3],
}

impl IdTriangle {
    pub fn resolve(&self, ids: &EdgeIdIndex) -> Option<Triangle> {
        let e0 = ids.index_of(self.edges[0])?;
        let e1 = ids.index_of(self.edges[1])?;
        let e2 = ids.index_of(self.edges[2])?;
        Triangle::new(self.vertices, [e0, e1, e2]).ok()
    }
}

/// One edge-broadcast program round: payloads per port plus the halt flag.
pub struct EdgeOut<M> {
    pub broadcasts: Vec<(usize, M)>,
    pub halt: bool,
}

/// Delivery shape seen by edge-broadcast programs: who said what on which of
/// my ports.
#[derive(Debug, Clone)]
pub struct EdgeDelivery<M> {
    pub src: VertexId,
    pub port: usize,
    pub msg: M,
}

/// An algorithm phrased purely in terms of per-edge broadcasts. The adapter
/// below runs it unchanged under EB (native) or PC (payloads packed per
/// primal neighbor and charged at their combined size).
pub trait EdgewiseProgram {
    type Msg: Payload;
    type Output;

    fn round(
        &mut self,
        view: &LocalView,
        round: u64,
        inbox: &[EdgeDelivery<Self::Msg>],
    ) -> EdgeOut<Self::Msg>;

    fn finish(&mut self, view: &LocalView) -> Self::Output;
}

/// Wire format of the adapter: one or more (edge-ordinal, payload) parts.
/// Under EB a message is a single part riding its edge; under PC all parts
/// for one neighbor travel together and the ordinal names the shared edge.
#[derive(Debug, Clone)]
pub struct EdgeWire<M> {
    pub parts: Vec<(u32, M)>,
}

impl<M: Payload> Payload for EdgeWire<M> {
    fn bit_len(&self) -> u64 {
        self.parts.iter().map(|(_, m)| m.bit_len()).sum()
    }
}

pub struct EdgewiseAdapter<P: EdgewiseProgram> {
    inner: P,
}

impl<P: EdgewiseProgram> EdgewiseAdapter<P> {
    pub fn new(inner: P) -> Self {
        EdgewiseAdapter { inner }
    }
}

impl<P: EdgewiseProgram> NodeProgram for EdgewiseAdapter<P> {
    type Msg = EdgeWire<P::Msg>;
    type Output = P::Output;

    fn step(&mut self, view: &LocalView, round: u64, inbox: &Inbox<Self::Msg>) -> Outbox<Self::Msg> {
        let mut translated: Vec<EdgeDelivery<P::Msg>> = Vec::new();
        for d in &inbox.deliveries {
            match d.via {
                Via::Edge { port } => {
                    for (_, m) in &d.msg.parts {
                        translated.push(EdgeDelivery {
                            src: d.src,
                            port,
                            msg: m.clone(),
                        });
                    }
                }
                Via::Direct => {
                    let shared = view.shared_ports_with(d.src);
                    for (ord, m) in &d.msg.parts {
                        let port = shared[*ord as usize];
                        translated.push(EdgeDelivery {
                            src: d.src,
                            port,
                            msg: m.clone(),
                        });
                    }
                }
            }
        }
        translated.sort_by(|a, b| (a.src, a.port).cmp(&(b.src, b.port)));
        let out = self.inner.round(view, round, &translated);
        let sends = match view.model {
            ModelKind::Eb => out
                .broadcasts
                .into_iter()
                .map(|(port, msg)| SendIntent::Broadcast {
                    port,
                    msg: EdgeWire {
                        parts: vec![(0, msg)],
                    },
                })
                .collect(),
            ModelKind::Pc => {
                let mut per_dst: std::collections::BTreeMap<VertexId, Vec<(u32, P::Msg)>> =
                    std::collections::BTreeMap::new();
                for (port, msg) in out.broadcasts {
                    for dst in view.others(port) {
                        let ord = view
                            .shared_ports_with(dst)
                            .iter()
                            .position(|&p| p == port)
                            .expect("own port") as u32;
                        per_dst.entry(dst).or_default().push((ord, msg.clone()));
                    }
                }
                per_dst
                    .into_iter()
                    .map(|(dst, mut parts)| {
                        parts.sort_by_key(|(ord, _)| *ord);
                        SendIntent::ToVertex {
                            dst,
                            msg: EdgeWire { parts },
                        }
                    })
                    .collect()
            }
            other => panic!("edgewise programs run under EB or PC, not {other}"),
        };
        Outbox {
            sends,
            halt: out.halt,
            fail: None,
        }
    }

    fn finish(&mut self, view: &LocalView) -> Self::Output {
        self.inner.finish(view)
    }
}

/// Announcement sent by every vertex on every port in round 0: its degree,
/// and the port number when it owns the edge (the ID dissemination round).
#[derive(Debug, Clone)]
pub struct Announce {
    pub deg: u32,
    pub owner_port: Option<u32>,
    pub width: u8,
}

impl Payload for Announce {
    fn bit_len(&self) -> u64 {
        self.width as u64 + self.owner_port.map_or(0, |_| self.width as u64)
    }
}

/// Tracks edge IDs and neighbor degrees learned from round-0 announcements.
pub struct AnnounceState {
    pub edge_ids: Vec<Option<EdgeIdWire>>,
    pub neighbor_deg: std::collections::BTreeMap<VertexId, u32>,
}

impl AnnounceState {
    pub fn new(view: &LocalView) -> Self {
        let width = id_bits(view.n) as u8;
        let me = view.vertex;
        let edge_ids = (0..view.degree())
            .map(|p| {
                (view.members(p)[0] == me).then_some(EdgeIdWire {
                    owner: me,
                    port: p as u32,
                    width,
                })
            })
            .collect();
        AnnounceState {
            edge_ids,
            neighbor_deg: Default::default(),
        }
    }

    pub fn round0_broadcasts(&self, view: &LocalView) -> Vec<(usize, Announce)> {
        let width = id_bits(view.n) as u8;
        (0..view.degree())
            .map(|p| {
                (
                    p,
                    Announce {
                        deg: view.degree() as u32,
                        owner_port: self.edge_ids[p].map(|id| id.port),
                        width,
                    },
                )
            })
            .collect()
    }

    pub fn absorb(&mut self, view: &LocalView, d: &EdgeDelivery<Announce>) {
        self.neighbor_deg.insert(d.src, d.msg.deg);
        if let Some(op) = d.msg.owner_port {
            if view.members(d.port)[0] == d.src {
                self.edge_ids[d.port] = Some(EdgeIdWire {
                    owner: d.src,
                    port: op,
                    width: d.msg.width,
                });
            }
        }
    }

    pub fn id_of(&self, port: usize) -> EdgeIdWire {
        self.edge_ids[port].expect("announcement round completed")
    }

    pub fn own_ids(&self) -> BTreeSet<EdgeIdWire> {
        self.edge_ids.iter().map(|id| id.expect("complete")).collect()
    }
}
