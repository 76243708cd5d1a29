//! δ-light triangle listing: every vertex of degree at most δ broadcasts its
//! full 1-neighborhood (each incident edge as ID plus member list), costing
//! O(rδ) broadcast rounds. A triangle with a light corner is then fully
//! visible to all three corners; the designated owner — the smallest-ID
//! heavy corner, or the smallest corner when all are light — outputs it.
//! With δ at least the maximum degree this lists every triangle.

use std::collections::{BTreeMap, BTreeSet};

use hypersim_core::{Hypergraph, TriangleClass, VertexId};
use hypersim_kernel::{run, Bandwidth, LocalView, Payload, RunOptions, SimError};

use crate::common::{
    AlgoModel, Announce, AnnounceState, EdgeDelivery, EdgeIdIndex, EdgeIdWire, EdgeOut,
    EdgewiseAdapter, EdgewiseProgram, EnumerationRun, IdTriangle,
};

#[derive(Debug, Clone)]
enum Msg {
    Hello(Announce),
    FullEdge { id: EdgeIdWire, members: Vec<VertexId> },
}

impl Payload for Msg {
    fn bit_len(&self) -> u64 {
        match self {
            Msg::Hello(a) => a.bit_len(),
            Msg::FullEdge { id, members } => {
                id.bit_len() + members.len() as u64 * id.width as u64
            }
        }
    }
}

struct LightVertex {
    class: TriangleClass,
    delta: Option<u64>,
    ann: AnnounceState,
    /// Edges learned from light neighbors (and own ports), keyed by ID.
    known: BTreeMap<EdgeIdWire, Vec<VertexId>>,
    /// Distinct edge IDs received from each light neighbor.
    received_edges: BTreeMap<VertexId, BTreeSet<EdgeIdWire>>,
    found: BTreeSet<IdTriangle>,
}

impl LightVertex {
    fn new(view: &LocalView, class: TriangleClass, delta: Option<u64>) -> Self {
        LightVertex {
            class,
            delta,
            ann: AnnounceState::new(view),
            known: BTreeMap::new(),
            received_edges: BTreeMap::new(),
            found: BTreeSet::new(),
        }
    }

    fn is_light(&self, deg: u64) -> bool {
        self.delta.map_or(true, |d| deg <= d)
    }

    fn light_me(&self, view: &LocalView) -> bool {
        self.is_light(view.degree() as u64)
    }

    fn ready(&self, view: &LocalView) -> bool {
        let mut neighbors = BTreeSet::new();
        for p in 0..view.degree() {
            neighbors.extend(view.others(p));
        }
        neighbors.into_iter().all(|u| match self.ann.neighbor_deg.get(&u) {
            Some(&deg) => {
                !self.is_light(deg as u64)
                    || self.received_edges.get(&u).map_or(deg == 0, |s| s.len() == deg as usize)
            }
            None => false,
        })
    }

    fn detect(&mut self, view: &LocalView) {
        let me = view.vertex;
        let my_deg = view.degree() as u64;
        // my own ports are known edges too
        for p in 0..view.degree() {
            self.known
                .entry(self.ann.id_of(p))
                .or_insert_with(|| view.members(p).to_vec());
        }
        // closing-edge candidates by vertex pair
        let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<(EdgeIdWire, &Vec<VertexId>)>> =
            BTreeMap::new();
        for (&id, members) in &self.known {
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    by_pair
                        .entry((members[i], members[j]))
                        .or_default()
                        .push((id, members));
                }
            }
        }
        let deg_of = |v: VertexId| -> Option<u64> {
            if v == me {
                Some(my_deg)
            } else {
                self.ann.neighbor_deg.get(&v).map(|&d| d as u64)
            }
        };
        let mut found = std::mem::take(&mut self.found);
        for pa in 0..view.degree() {
            for pc in 0..view.degree() {
                if pa == pc {
                    continue;
                }
                let id_a = self.ann.id_of(pa);
                let id_c = self.ann.id_of(pc);
                for &x in &view.others(pa) {
                    for &y in &view.others(pc) {
                        if x == y {
                            continue;
                        }
                        let (Some(dx), Some(dy)) = (deg_of(x), deg_of(y)) else {
                            continue;
                        };
                        // the triangle must be delta-light
                        if !(self.is_light(dx) || self.is_light(dy) || self.is_light(my_deg)) {
                            continue;
                        }
                        // ownership: smallest heavy corner, else smallest corner
                        let corners = [(me, my_deg), (x, dx), (y, dy)];
                        let heavies: Vec<VertexId> = corners
                            .iter()
                            .filter(|(_, d)| !self.is_light(*d))
                            .map(|(v, _)| *v)
                            .collect();
                        let owner = heavies
                            .iter()
                            .min()
                            .copied()
                            .unwrap_or_else(|| me.min(x).min(y));
                        if owner != me {
                            continue;
                        }
                        let Some(cands) = by_pair.get(&(x.min(y), x.max(y))) else {
                            continue;
                        };
                        for &(id_b, members_b) in cands {
                            if id_b == id_a || id_b == id_c {
                                continue;
                            }
                            if self.class == TriangleClass::Induced
                                && (members_b.contains(&me)
                                    || view.members(pa).contains(&y)
                                    || view.members(pc).contains(&x))
                            {
                                continue;
                            }
                            found.insert(IdTriangle {
                                vertices: [x, me, y],
                                edges: [id_a, id_c, id_b],
                            });
                        }
                    }
                }
            }
        }
        self.found = found;
    }
}

impl EdgewiseProgram for LightVertex {
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
                Msg::FullEdge { id, members } => {
                    self.known.insert(*id, members.clone());
                    self.received_edges.entry(d.src).or_default().insert(*id);
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
        if self.light_me(view) && slot < view.degree() {
            let msg = Msg::FullEdge {
                id: self.ann.id_of(slot),
                members: view.members(slot).to_vec(),
            };
            return EdgeOut {
                broadcasts: (0..view.degree()).map(|p| (p, msg.clone())).collect(),
                halt: false,
            };
        }
        if self.ready(view) {
            self.detect(view);
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
        std::mem::take(&mut self.found)
    }
}

/// Lists the δ-light triangles of the requested class under EB or PC;
/// `delta = None` means unbounded (full enumeration).
pub fn light_triangle_enumerate(
    h: &Hypergraph,
    model: AlgoModel,
    delta: Option<u64>,
    class: TriangleClass,
    bw: Bandwidth,
) -> Result<EnumerationRun, SimError> {
    let ids = EdgeIdIndex::new(h);
    let out = run(
        h,
        model.kind(),
        bw,
        &RunOptions::with_max_rounds(
            64 * (h.rank() as u64 + 1) * (h.max_degree() as u64 + h.n() as u64 + 4),
        ),
        |view: &LocalView| EdgewiseAdapter::new(LightVertex::new(view, class, delta)),
    )?;
    let per_vertex = out
        .outputs
        .into_iter()
        .map(|set| {
            set.into_iter()
                .map(|t| t.resolve(&ids).expect("same id scheme"))
                .collect()
        })
        .collect();
    Ok(EnumerationRun {
        class,
        per_vertex,
        metrics: out.metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypersim_oracle::{enumerate_bruteforce, is_delta_light};

    #[test]
    fn unbounded_delta_is_full_enumeration() {
        for seed in 0..6u64 {
            let h = hypersim_core::sample_uniform_random(9, 3, 0.4, seed).unwrap();
            let run = light_triangle_enumerate(
                &h,
                AlgoModel::Eb,
                None,
                TriangleClass::Simple,
                Bandwidth::default_for(9),
            )
            .unwrap();
            let oracle = enumerate_bruteforce(&h, TriangleClass::Simple);
            assert!(run.disjoint());
            assert_eq!(run.union(), oracle.triangles, "seed {seed}");
        }
    }

    #[test]
    fn delta_zero_lists_nothing_when_degrees_positive() {
        let h = Hypergraph::build(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let run = light_triangle_enumerate(
            &h,
            AlgoModel::Eb,
            Some(0),
            TriangleClass::Simple,
            Bandwidth::default_for(3),
        )
        .unwrap();
        assert_eq!(run.total(), 0);
    }

    #[test]
    fn finite_delta_matches_filtered_oracle() {
        for seed in 0..6u64 {
            let h = hypersim_core::sample_uniform_random(10, 3, 0.5, seed).unwrap();
            // median degree as the lightness threshold
            let mut degs: Vec<usize> = (0..10).map(|v| h.degree(VertexId(v))).collect();
            degs.sort_unstable();
            let delta = degs[5] as u64;
            let run = light_triangle_enumerate(
                &h,
                AlgoModel::Eb,
                Some(delta),
                TriangleClass::Simple,
                Bandwidth::default_for(10),
            )
            .unwrap();
            let expected: std::collections::BTreeSet<_> =
                enumerate_bruteforce(&h, TriangleClass::Simple)
                    .triangles
                    .into_iter()
                    .filter(|t| is_delta_light(&h, t, delta as usize))
                    .collect();
            assert!(run.disjoint());
            assert_eq!(run.union(), expected, "seed {seed} delta {delta}");
        }
    }

    #[test]
    fn induced_class_under_pc() {
        let h = hypersim_core::sample_uniform_random(8, 3, 0.5, 3).unwrap();
        let run = light_triangle_enumerate(
            &h,
            AlgoModel::Pc,
            None,
            TriangleClass::Induced,
            Bandwidth::default_for(8),
        )
        .unwrap();
        let oracle = enumerate_bruteforce(&h, TriangleClass::Induced);
        assert!(run.disjoint());
        assert_eq!(run.union(), oracle.triangles);
    }
}
