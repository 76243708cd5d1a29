//! Density-parameterized enumeration: one integrated program running
//!
//! 1. parallel peel against geometrically increasing density guesses,
//! 2. a max-flood of the local estimates,
//! 3. a nonuniform peel with the flooded estimates, recording for each
//!    vertex its deactivation round `t_v` and the incident edges that still
//!    contained active co-members then (at most `2β_v` of them),
//! 4. one broadcast of every `t_v`, then of those recorded edges,
//! 5. local detection with ownership by lexicographically maximal
//!    `(t, vertex)` among the corners.
//!
//! Rounds come to O(μ(H)·r + log n): three logarithmic phases plus a
//! broadcast of O(μ) member lists chunked at roughly `r` frames each.

use std::collections::{BTreeMap, BTreeSet};

use hypersim_core::combin::{binomial_u128, value_bits};
use hypersim_core::{Hypergraph, TriangleClass, VertexId};
use hypersim_kernel::engine::lockstep_rounds;
use hypersim_kernel::{run, Bandwidth, LocalView, Payload, RunOptions, SimError};

use crate::common::{
    AlgoModel, Announce, AnnounceState, EdgeDelivery, EdgeIdIndex, EdgeIdWire, EdgeOut,
    EdgewiseAdapter, EdgewiseProgram, EnumerationRun, IdTriangle,
};
use crate::peel::Threshold;

#[derive(Debug, Clone)]
enum Msg {
    Hello(Announce),
    Mask { mask: u64, width: u8 },
    Beta(u64),
    State(bool),
    Deactivated(u64),
    EdgeCount(u32),
    Edge { id: EdgeIdWire, members: Vec<VertexId> },
}

impl Payload for Msg {
    fn bit_len(&self) -> u64 {
        match self {
            Msg::Hello(a) => a.bit_len(),
            Msg::Mask { width, .. } => *width as u64,
            Msg::Beta(v) => value_bits(*v),
            Msg::State(_) => 1,
            Msg::Deactivated(t) => value_bits(*t),
            Msg::EdgeCount(c) => value_bits(*c as u64),
            Msg::Edge { id, members } => id.bit_len() + members.len() as u64 * id.width as u64,
        }
    }
}

struct DensityVertex {
    class: TriangleClass,
    rounds: u64,
    instances: u32,
    ann: AnnounceState,
    // parallel peel
    active_mask: u64,
    // flood
    beta: u64,
    // nonuniform peel
    active: bool,
    t: Option<u64>,
    witness_ports: Vec<usize>,
    // exchange
    t_of: BTreeMap<VertexId, u64>,
    count_of: BTreeMap<VertexId, u32>,
    edges_from: BTreeMap<VertexId, BTreeSet<EdgeIdWire>>,
    known: BTreeMap<EdgeIdWire, Vec<VertexId>>,
    found: BTreeSet<IdTriangle>,
}

impl DensityVertex {
    fn new(view: &LocalView, class: TriangleClass, instances: u32, rounds: u64) -> Self {
        DensityVertex {
            class,
            rounds,
            instances,
            ann: AnnounceState::new(view),
            active_mask: u64::MAX >> (64 - instances.max(1)),
            beta: 0,
            active: true,
            t: None,
            witness_ports: Vec::new(),
            t_of: BTreeMap::new(),
            count_of: BTreeMap::new(),
            edges_from: BTreeMap::new(),
            known: BTreeMap::new(),
            found: BTreeSet::new(),
        }
    }

    fn everywhere(&self, view: &LocalView, msg: Msg) -> Vec<(usize, Msg)> {
        (0..view.degree()).map(|p| (p, msg.clone())).collect()
    }

    fn pp_update(&mut self, view: &LocalView, inbox: &[EdgeDelivery<Msg>]) {
        let mut port_or = vec![0u64; view.degree()];
        for d in inbox {
            if let Msg::Mask { mask, .. } = d.msg {
                port_or[d.port] |= mask;
            }
        }
        for i in 1..=self.instances {
            let bit = 1u64 << (i - 1);
            if self.active_mask & bit == 0 {
                continue;
            }
            let count = port_or.iter().filter(|&&m| m & bit != 0).count();
            if (count as u128) <= 2u128 << i {
                self.active_mask &= !bit;
            }
        }
    }

    fn alpha(&self) -> u64 {
        (1..=self.instances)
            .find(|&i| self.active_mask & (1 << (i - 1)) == 0)
            .map(|i| 1u64 << i)
            // with M = C(n, r) the top instance always succeeds; a fully
            // active vertex would certify the bound was wrong
            .unwrap_or(1u64 << self.instances)
    }

    fn peel_update(&mut self, view: &LocalView, inbox: &[EdgeDelivery<Msg>], t_now: u64) {
        if !self.active {
            return;
        }
        let mut active_ports = vec![false; view.degree()];
        for d in inbox {
            if let Msg::State(true) = d.msg {
                active_ports[d.port] = true;
            }
        }
        let witnesses: Vec<usize> = (0..view.degree()).filter(|&p| active_ports[p]).collect();
        if Threshold::integer(self.beta).admits(witnesses.len()) {
            self.active = false;
            self.t = Some(t_now);
            self.witness_ports = witnesses;
        }
    }

    fn t_final(&self, rounds: u64) -> u64 {
        self.t.unwrap_or(rounds + 1)
    }

    fn ready(&self, view: &LocalView, sent: usize) -> bool {
        if sent < self.witness_ports.len() {
            return false;
        }
        let mut neighbors = BTreeSet::new();
        for p in 0..view.degree() {
            neighbors.extend(view.others(p));
        }
        neighbors.into_iter().all(|u| match self.count_of.get(&u) {
            Some(&cnt) => {
                self.edges_from.get(&u).map_or(cnt == 0, |s| s.len() == cnt as usize)
            }
            None => false,
        })
    }

    fn detect(&mut self, view: &LocalView) {
        let me = view.vertex;
        let my_t = self.t_final(self.rounds);
        for p in 0..view.degree() {
            self.known
                .entry(self.ann.id_of(p))
                .or_insert_with(|| view.members(p).to_vec());
        }
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
                        let (Some(&tx), Some(&ty)) = (self.t_of.get(&x), self.t_of.get(&y))
                        else {
                            continue;
                        };
                        // ownership: lexicographically maximal (t, id)
                        if (my_t, me) < (tx, x) || (my_t, me) < (ty, y) {
                            continue;
                        }
                        for (&id_b, members_b) in &self.known {
                            if id_b == id_a || id_b == id_c {
                                continue;
                            }
                            if !(members_b.contains(&x) && members_b.contains(&y)) {
                                continue;
                            }
                            if self.class == TriangleClass::Induced
                                && (members_b.contains(&me)
                                    || view.members(pa).contains(&y)
                                    || view.members(pc).contains(&x))
                            {
                                continue;
                            }
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

impl EdgewiseProgram for DensityVertex {
    type Msg = Msg;
    type Output = BTreeSet<IdTriangle>;

    fn round(&mut self, view: &LocalView, round: u64, inbox: &[EdgeDelivery<Msg>]) -> EdgeOut<Msg> {
        let r = self.rounds;
        // phase boundaries: announce at 0; parallel peel broadcasts 1..=r;
        // flood r+1..=2r; nonuniform peel 2r+1..=3r; t at 3r+1; counts at
        // 3r+2; edges from 3r+3 on
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
                Msg::Beta(b) => self.beta = self.beta.max(*b),
                Msg::Deactivated(t) => {
                    self.t_of.insert(d.src, *t);
                }
                Msg::EdgeCount(c) => {
                    self.count_of.insert(d.src, *c);
                }
                Msg::Edge { id, members } => {
                    self.known.insert(*id, members.clone());
                    self.edges_from.entry(d.src).or_default().insert(*id);
                }
                Msg::Mask { .. } | Msg::State(_) => {}
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
        if round <= r {
            if round >= 2 {
                self.pp_update(view, inbox);
            }
            return EdgeOut {
                broadcasts: self.everywhere(
                    view,
                    Msg::Mask {
                        mask: self.active_mask,
                        width: self.instances as u8,
                    },
                ),
                halt: false,
            };
        }
        if round <= 2 * r {
            if round == r + 1 {
                self.pp_update(view, inbox);
                self.beta = self.alpha();
            }
            return EdgeOut {
                broadcasts: self.everywhere(view, Msg::Beta(self.beta)),
                halt: false,
            };
        }
        if round <= 3 * r {
            if round == 2 * r + 1 {
                // final flood maximum already absorbed above
            } else {
                self.peel_update(view, inbox, round - 1 - 2 * r);
            }
            return EdgeOut {
                broadcasts: self.everywhere(view, Msg::State(self.active)),
                halt: false,
            };
        }
        if round == 3 * r + 1 {
            self.peel_update(view, inbox, r);
            let t = self.t_final(r);
            return EdgeOut {
                broadcasts: self.everywhere(view, Msg::Deactivated(t)),
                halt: false,
            };
        }
        if round == 3 * r + 2 {
            return EdgeOut {
                broadcasts: self
                    .everywhere(view, Msg::EdgeCount(self.witness_ports.len() as u32)),
                halt: false,
            };
        }
        let k = (round - (3 * r + 3)) as usize;
        if k < self.witness_ports.len() {
            let port = self.witness_ports[k];
            let msg = Msg::Edge {
                id: self.ann.id_of(port),
                members: view.members(port).to_vec(),
            };
            return EdgeOut {
                broadcasts: self.everywhere(view, msg),
                halt: false,
            };
        }
        if self.ready(view, k) {
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

/// Full density-parameterized enumeration under EB or PC, with the a-priori
/// density bound `M = C(n, r)`.
pub fn density_enumerate(
    h: &Hypergraph,
    model: AlgoModel,
    class: TriangleClass,
    bw: Bandwidth,
) -> Result<EnumerationRun, SimError> {
    let ids = EdgeIdIndex::new(h);
    let rounds = lockstep_rounds(h.n());
    let m_bound = binomial_u128(h.n(), h.rank().max(2)).unwrap_or(u128::MAX);
    let instances = {
        let mut k = 1u32;
        while (1u128 << k) < m_bound && k < 63 {
            k += 1;
        }
        k
    };
    let out = run(
        h,
        model.kind(),
        bw,
        &RunOptions::with_max_rounds(
            64 * (rounds + 2) * (instances as u64 + h.rank() as u64 + 2)
                + 64 * (h.m() as u64 + 2) * (h.rank() as u64 + 2),
        ),
        |view: &LocalView| EdgewiseAdapter::new(DensityVertex::new(view, class, instances, rounds)),
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
