//! Bounded-degree enumeration: one announcement round assigns `(owner,
//! port)` edge IDs and shares degrees, then every vertex broadcasts its
//! incident edge IDs over at most Δ slots. A middle vertex `v` of a
//! candidate walk `(x, eA, v, eC, y)` certifies the closing edge by
//! receiving its ID from both `x` and `y`; the remaining class conditions
//! are checked against its own member lists. The smallest-ID corner outputs.

use std::collections::{BTreeMap, BTreeSet};

use hypersim_core::combin::id_bits;
use hypersim_core::{Hypergraph, TriangleClass, VertexId};
use hypersim_kernel::{run, Bandwidth, LocalView, Payload, RunOptions, SimError};

use crate::common::{
    AlgoModel, Announce, AnnounceState, EdgeDelivery, EdgeIdIndex, EdgeIdWire, EdgeOut,
    EdgewiseAdapter, EdgewiseProgram, EnumerationRun, IdTriangle,
};

#[derive(Debug, Clone)]
enum Msg {
    Hello(Announce),
    Incident(EdgeIdWire),
}

impl Payload for Msg {
    fn bit_len(&self) -> u64 {
        match self {
            Msg::Hello(a) => a.bit_len(),
            Msg::Incident(id) => id.bit_len(),
        }
    }
}

struct BoundedVertex {
    class: TriangleClass,
    ann: AnnounceState,
    ids_of: BTreeMap<VertexId, BTreeSet<EdgeIdWire>>,
    found: BTreeSet<IdTriangle>,
    done: bool,
}

impl BoundedVertex {
    fn new(view: &LocalView, class: TriangleClass) -> Self {
        assert!(
            matches!(class, TriangleClass::Simple | TriangleClass::Induced),
            "edge-ID broadcasts support the simple and induced classes"
        );
        BoundedVertex {
            class,
            ann: AnnounceState::new(view),
            ids_of: BTreeMap::new(),
            found: BTreeSet::new(),
            done: false,
        }
    }

    fn neighbors_complete(&self, view: &LocalView) -> bool {
        let mut neighbors = BTreeSet::new();
        for p in 0..view.degree() {
            neighbors.extend(view.others(p));
        }
        neighbors.into_iter().all(|u| {
            match self.ann.neighbor_deg.get(&u) {
                Some(&deg) => {
                    self.ids_of.get(&u).map_or(deg == 0, |ids| ids.len() == deg as usize)
                }
                None => false,
            }
        })
    }

    fn detect(&mut self, view: &LocalView) {
        let me = view.vertex;
        let own_ids = self.ann.own_ids();
        // closing-edge candidates per unordered neighbor pair, materialized
        // once instead of per port combination
        let mut closing: BTreeMap<(VertexId, VertexId), Vec<EdgeIdWire>> = BTreeMap::new();
        let mut closing_for = |x: VertexId, y: VertexId, ids_of: &BTreeMap<VertexId, BTreeSet<EdgeIdWire>>| {
            let key = (x.min(y), x.max(y));
            closing
                .entry(key)
                .or_insert_with(|| match (ids_of.get(&key.0), ids_of.get(&key.1)) {
                    (Some(a), Some(b)) => a.intersection(b).copied().collect(),
                    _ => Vec::new(),
                })
                .clone()
        };
        for pa in 0..view.degree() {
            for pc in 0..view.degree() {
                if pa == pc {
                    continue;
                }
                let id_a = self.ann.id_of(pa);
                let id_c = self.ann.id_of(pc);
                for &x in &view.others(pa) {
                    for &y in &view.others(pc) {
                        if x == y || me != me.min(x).min(y) {
                            continue;
                        }
                        for id_b in closing_for(x, y, &self.ids_of) {
                            if id_b == id_a || id_b == id_c || id_a == id_c {
                                continue;
                            }
                            if self.class == TriangleClass::Induced {
                                // the closing edge avoids me, and each side
                                // edge avoids the opposite corner
                                if own_ids.contains(&id_b)
                                    || view.members(pa).contains(&y)
                                    || view.members(pc).contains(&x)
                                {
                                    continue;
                                }
                            }
                            // walk (x, eA, me, eC, y, eB)
                            self.found.insert(IdTriangle {
                                vertices: [x, me, y],
                                edges: [id_a, id_c, id_b],
                            });
                        }
                    }
                }
            }
        }
    }
}

impl EdgewiseProgram for BoundedVertex {
    type Msg = Msg;
    type Output = BTreeSet<IdTriangle>;

    fn round(&mut self, view: &LocalView, round: u64, inbox: &[EdgeDelivery<Msg>]) -> EdgeOut<Msg> {
        for d in inbox {
            match &d.msg {
                Msg::Hello(a) => self.ann.absorb(
                    view,
                    &EdgeDelivery {
                        src: d.src,
                        port: d.port,
                        msg: a.clone(),
                    },
                ),
                Msg::Incident(id) => {
                    self.ids_of.entry(d.src).or_default().insert(*id);
                }
            }
        }
        if round == 0 {
            return EdgeOut {
                broadcasts: self
                    .ann
                    .round0_broadcasts(view)
                    .into_iter()
                    .map(|(p, a)| (p, Msg::Hello(a)))
                    .collect(),
                halt: false,
            };
        }
        let slot = (round - 1) as usize;
        if slot < view.degree() {
            let id = self.ann.id_of(slot);
            return EdgeOut {
                broadcasts: (0..view.degree()).map(|p| (p, Msg::Incident(id))).collect(),
                halt: false,
            };
        }
        if self.neighbors_complete(view) {
            self.detect(view);
            self.done = true;
            return EdgeOut {
                broadcasts: Vec::new(),
                halt: true,
            };
        }
        EdgeOut {
            broadcasts: Vec::new(),
            halt: false,
        }
    }

    fn finish(&mut self, _: &LocalView) -> Self::Output {
        debug_assert!(self.done || self.found.is_empty());
        std::mem::take(&mut self.found)
    }
}

/// Runs the bounded-degree algorithm under EB or PC. Default class is
/// induced (the certification conditions are exactly the induced predicate);
/// the simple variant relaxes them to edge distinctness.
pub fn bounded_degree_enumerate(
    h: &Hypergraph,
    model: AlgoModel,
    class: TriangleClass,
    bw: Bandwidth,
) -> Result<EnumerationRun, SimError> {
    let _ = id_bits(h.n());
    let ids = EdgeIdIndex::new(h);
    let out = run(
        h,
        model.kind(),
        bw,
        &RunOptions::with_max_rounds(64 * (h.max_degree() as u64 + h.n() as u64 + 4)),
        |view: &LocalView| EdgewiseAdapter::new(BoundedVertex::new(view, class)),
    )?;
    let per_vertex = out
        .outputs
        .into_iter()
        .map(|set| {
            set.into_iter()
                .map(|t| t.resolve(&ids).expect("ids assigned by the same scheme"))
                .collect()
        })
        .collect();
    Ok(EnumerationRun {
        class,
        per_vertex,
        metrics: out.metrics,
    })
}
