//! Cross-model simulation: wraps a program written for one model so it runs
//! under a weaker one, paying the per-round budget the model relationships
//! allow:
//!
//! * EC -> EB, EC -> EU, EB -> EU: `r` rounds per simulated round;
//! * ES -> EU: `ceil(log2 r)` rounds through the doubling broadcast;
//! * EP -> anything: a single round;
//! * EC -> PC: `Δ₂` rounds, one per parallel edge.
//!
//! Emulation framing (intended target, broadcast origin, shared-edge
//! ordinal) rides as uncounted addressing metadata, mirroring the kernel's
//! own treatment of addressing. ES -> EU supports contention-free programs
//! only: the doubling schedule cannot arbitrate, so observed contention
//! aborts the run instead of silently diverging.

use std::collections::BTreeMap;

use hypersim_core::combin::ceil_log2;
use hypersim_core::{Hypergraph, VertexId};

use crate::engine::{run, NodeProgram, RunOptions, RunOutput, SimError};
use crate::message::{Delivery, Inbox, Outbox, Payload, SendIntent, Via};
use crate::model::{Bandwidth, ModelKind};
use crate::view::LocalView;

/// Wrapped message: the inner payload plus emulation framing.
#[derive(Debug, Clone)]
pub struct EmuMsg<M> {
    pub inner: M,
    pub target: Option<VertexId>,
    pub origin: Option<VertexId>,
    pub edge_ord: Option<u32>,
}

impl<M: Payload> Payload for EmuMsg<M> {
    fn bit_len(&self) -> u64 {
        self.inner.bit_len()
    }
}

/// Rounds of `to` needed to emulate one round of `from` on `h`, or `None`
/// for an unsupported pair.
pub fn emulation_budget(from: ModelKind, to: ModelKind, h: &Hypergraph) -> Option<u64> {
    use ModelKind::*;
    let r = h.rank();
    match (from, to) {
        (Ec, Eb) | (Ec, Eu) | (Eb, Eu) => Some((r.saturating_sub(1)).max(1) as u64),
        (Es, Eu) => Some((ceil_log2(r.max(2)) as u64).max(1)),
        (Ep, Eb) | (Ep, Eu) | (Ep, Ec) | (Ep, Es) | (Ep, Pc) | (Ep, Clique) => Some(1),
        (Ec, Pc) => Some((h.max_pair_degree() as u64).max(1)),
        _ => None,
    }
}

struct Emulated<P: NodeProgram> {
    inner: P,
    inner_view: LocalView,
    from: ModelKind,
    to: ModelKind,
    budget: u64,
    slot_plan: Vec<Vec<SendIntent<EmuMsg<P::Msg>>>>,
    staged: Vec<Delivery<P::Msg>>,
    /// ES->EU doubling state: port -> (origin, payload) held this simulated
    /// round; true when self-originated.
    es_holding: BTreeMap<usize, (VertexId, P::Msg, bool)>,
    inner_round: u64,
    inner_halted: bool,
}

impl<P: NodeProgram> Emulated<P> {
    fn shared_ports_with(view: &LocalView, w: VertexId) -> Vec<usize> {
        view.shared_ports_with(w)
    }

    fn rank_in_edge(members: &[VertexId], origin: VertexId, v: VertexId) -> usize {
        if v == origin {
            return 0;
        }
        1 + members
            .iter()
            .filter(|&&w| w != origin && w < v)
            .count()
    }

    fn member_at_rank(members: &[VertexId], origin: VertexId, rank: usize) -> VertexId {
        if rank == 0 {
            return origin;
        }
        members
            .iter()
            .copied()
            .filter(|&w| w != origin)
            .nth(rank - 1)
            .expect("rank within edge")
    }

    /// Local legality of the inner outbox for the from-model (all supported
    /// from-models are edge-local).
    fn validate_inner(&self, sends: &[SendIntent<P::Msg>]) -> Result<(), String> {
        let view = &self.inner_view;
        let mut used = std::collections::BTreeSet::new();
        for send in sends {
            match (self.from, send) {
                (ModelKind::Ec, SendIntent::OnEdge { port, dst, .. }) => {
                    if *port >= view.degree() || !view.others(*port).contains(dst) {
                        return Err(format!("bad EC target {dst} on port {port}"));
                    }
                    if !used.insert((*port, dst.idx() + 1)) {
                        return Err(format!("EC channel reuse on port {port}"));
                    }
                }
                (ModelKind::Eb | ModelKind::Es, SendIntent::Broadcast { port, .. }) => {
                    if *port >= view.degree() {
                        return Err(format!("port {port} out of range"));
                    }
                    if !used.insert((*port, 0)) {
                        return Err(format!("two broadcasts on port {port}"));
                    }
                }
                (ModelKind::Ep, SendIntent::OnEdge { port, dst, .. }) => {
                    if *port >= view.degree() || !view.others(*port).contains(dst) {
                        return Err(format!("bad EP target {dst} on port {port}"));
                    }
                    if !used.insert((*port, 0)) {
                        return Err(format!("two EP sends on port {port}"));
                    }
                }
                _ => return Err("send kind not legal for the simulated model".into()),
            }
        }
        Ok(())
    }

    /// Distributes the inner outbox over the budgeted slots.
    fn plan(&mut self, sends: Vec<SendIntent<P::Msg>>) -> Result<(), String> {
        use ModelKind::*;
        self.validate_inner(&sends)?;
        let view = self.inner_view.clone();
        let budget = self.budget as usize;
        let mut plan: Vec<Vec<SendIntent<EmuMsg<P::Msg>>>> = vec![Vec::new(); budget];
        let wrap = |inner: P::Msg| EmuMsg {
            inner,
            target: None,
            origin: None,
            edge_ord: None,
        };
        match (self.from, self.to) {
            (Ec, Eb) | (Ec, Eu) => {
                let mut by_port: BTreeMap<usize, Vec<(VertexId, P::Msg)>> = BTreeMap::new();
                for send in sends {
                    if let SendIntent::OnEdge { port, dst, msg } = send {
                        by_port.entry(port).or_default().push((dst, msg));
                    }
                }
                for (port, mut msgs) in by_port {
                    msgs.sort_by_key(|(dst, _)| *dst);
                    for (k, (dst, msg)) in msgs.into_iter().enumerate() {
                        let send = if self.to == Eb {
                            SendIntent::Broadcast {
                                port,
                                msg: EmuMsg {
                                    target: Some(dst),
                                    ..wrap(msg)
                                },
                            }
                        } else {
                            SendIntent::OnEdge {
                                port,
                                dst,
                                msg: wrap(msg),
                            }
                        };
                        plan[k].push(send);
                    }
                }
            }
            (Eb, Eu) => {
                for send in sends {
                    if let SendIntent::Broadcast { port, msg } = send {
                        for (k, dst) in view.others(port).into_iter().enumerate() {
                            plan[k].push(SendIntent::OnEdge {
                                port,
                                dst,
                                msg: wrap(msg.clone()),
                            });
                        }
                    }
                }
            }
            (Es, Eu) => {
                // the doubling schedule is driven per-slot from es_holding
                for send in sends {
                    if let SendIntent::Broadcast { port, msg } = send {
                        self.es_holding
                            .insert(port, (view.vertex, msg, true));
                    }
                }
            }
            (Ep, to) => {
                for send in sends {
                    if let SendIntent::OnEdge { port, dst, msg } = send {
                        let translated = match to {
                            Eb | Es => SendIntent::Broadcast {
                                port,
                                msg: EmuMsg {
                                    target: Some(dst),
                                    ..wrap(msg)
                                },
                            },
                            Eu | Ec => SendIntent::OnEdge {
                                port,
                                dst,
                                msg: wrap(msg),
                            },
                            Pc | Clique => {
                                let ord = Self::shared_ports_with(&view, dst)
                                    .iter()
                                    .position(|&p| p == port)
                                    .expect("own port") as u32;
                                SendIntent::ToVertex {
                                    dst,
                                    msg: EmuMsg {
                                        edge_ord: Some(ord),
                                        ..wrap(msg)
                                    },
                                }
                            }
                            Ep => unreachable!("unsupported pair rejected earlier"),
                        };
                        plan[0].push(translated);
                    }
                }
            }
            (Ec, Pc) => {
                let mut by_dst: BTreeMap<VertexId, Vec<(usize, P::Msg)>> = BTreeMap::new();
                for send in sends {
                    if let SendIntent::OnEdge { port, dst, msg } = send {
                        by_dst.entry(dst).or_default().push((port, msg));
                    }
                }
                for (dst, mut msgs) in by_dst {
                    msgs.sort_by_key(|(port, _)| *port);
                    let shared = Self::shared_ports_with(&view, dst);
                    for (k, (port, msg)) in msgs.into_iter().enumerate() {
                        let ord = shared
                            .iter()
                            .position(|&p| p == port)
                            .expect("target shares the edge") as u32;
                        plan[k].push(SendIntent::ToVertex {
                            dst,
                            msg: EmuMsg {
                                edge_ord: Some(ord),
                                ..wrap(msg)
                            },
                        });
                    }
                }
            }
            _ => return Err("unsupported simulation pair".into()),
        }
        self.slot_plan = plan;
        Ok(())
    }

    /// Routes one to-model delivery into the staged inbox of the inner
    /// program (or the doubling relay state).
    fn absorb(&mut self, d: Delivery<EmuMsg<P::Msg>>, view: &LocalView) -> Result<(), String> {
        use ModelKind::*;
        match (self.from, self.to) {
            (Es, Eu) => {
                let Via::Edge { port } = d.via else {
                    return Err("unexpected direct delivery".into());
                };
                let origin = d.msg.origin.ok_or("missing doubling origin")?;
                if let Some((held, _, _)) = self.es_holding.get(&port) {
                    if *held != origin {
                        return Err(format!(
                            "solocast contention on port {port}: {held} vs {origin}"
                        ));
                    }
                } else {
                    self.es_holding.insert(port, (origin, d.msg.inner, false));
                }
                Ok(())
            }
            (Ec, Eb) | (Ep, Eb) | (Ep, Es) => {
                if d.msg.target == Some(view.vertex) {
                    self.staged.push(Delivery {
                        src: d.src,
                        via: d.via,
                        msg: d.msg.inner,
                    });
                }
                Ok(())
            }
            (Ec, Pc) | (Ep, Pc) | (Ep, Clique) => {
                let ord = d.msg.edge_ord.ok_or("missing edge ordinal")? as usize;
                let shared = Self::shared_ports_with(view, d.src);
                let port = *shared.get(ord).ok_or("edge ordinal out of range")?;
                self.staged.push(Delivery {
                    src: d.src,
                    via: Via::Edge { port },
                    msg: d.msg.inner,
                });
                Ok(())
            }
            _ => {
                self.staged.push(Delivery {
                    src: d.src,
                    via: d.via,
                    msg: d.msg.inner,
                });
                Ok(())
            }
        }
    }
}

impl<P: NodeProgram> NodeProgram for Emulated<P> {
    type Msg = EmuMsg<P::Msg>;
    type Output = P::Output;

    fn step(&mut self, view: &LocalView, round: u64, inbox: &Inbox<Self::Msg>) -> Outbox<Self::Msg> {
        if !inbox.lost_arbitration.is_empty() {
            return Outbox::failed(
                "arbitration contention cannot be emulated within the budget".into(),
            );
        }
        for d in inbox.deliveries.iter().cloned() {
            if let Err(e) = self.absorb(d, view) {
                return Outbox::failed(e);
            }
        }
        let slot = (round % self.budget) as usize;
        if slot == 0 {
            // finish the previous simulated round: held doubling payloads are
            // now fully distributed
            let held = std::mem::take(&mut self.es_holding);
            for (port, (origin, msg, mine)) in held {
                if !mine {
                    self.staged.push(Delivery {
                        src: origin,
                        via: Via::Edge { port },
                        msg,
                    });
                }
            }
            if self.inner_halted {
                return Outbox::halting(Vec::new());
            }
            let mut staged = std::mem::take(&mut self.staged);
            staged.sort_by(|a, b| (a.src, a.via).cmp(&(b.src, b.via)));
            let inner_inbox = Inbox {
                deliveries: staged,
                lost_arbitration: Vec::new(),
            };
            let out = self
                .inner
                .step(&self.inner_view, self.inner_round, &inner_inbox);
            self.inner_round += 1;
            if let Some(fail) = out.fail {
                return Outbox::failed(fail);
            }
            self.inner_halted = out.halt;
            if let Err(e) = self.plan(out.sends) {
                return Outbox::failed(e);
            }
        }
        let mut sends = std::mem::take(&mut self.slot_plan[slot]);
        // per-slot doubling sends for ES -> EU
        if self.from == ModelKind::Es && self.to == ModelKind::Eu {
            for (&port, (origin, msg, _)) in self.es_holding.iter() {
                let members = self.inner_view.members(port);
                let k = members.len();
                let i = Self::rank_in_edge(members, *origin, view.vertex);
                let stride = 1usize << slot;
                if i < stride && i + stride < k {
                    sends.push(SendIntent::OnEdge {
                        port,
                        dst: Self::member_at_rank(members, *origin, i + stride),
                        msg: EmuMsg {
                            inner: msg.clone(),
                            target: None,
                            origin: Some(*origin),
                            edge_ord: None,
                        },
                    });
                }
            }
        }
        let halt_now = self.inner_halted && slot as u64 == self.budget - 1;
        Outbox {
            sends,
            halt: halt_now,
            fail: None,
        }
    }

    fn finish(&mut self, _view: &LocalView) -> Self::Output {
        self.inner.finish(&self.inner_view)
    }
}

/// Runs a program written for `from` under `to`, one budgeted block of `to`
/// rounds per simulated `from` round. Outputs equal direct execution for
/// programs within the supported envelope.
pub fn run_emulated<P, F>(
    h: &Hypergraph,
    from: ModelKind,
    to: ModelKind,
    bw: Bandwidth,
    opts: &RunOptions,
    mut make: F,
) -> Result<RunOutput<P::Output>, SimError>
where
    P: NodeProgram,
    F: FnMut(&LocalView) -> P,
{
    let budget = emulation_budget(from, to, h).ok_or_else(|| {
        SimError::Config(format!("unsupported simulation pair {from} -> {to}"))
    })?;
    run(h, to, bw, opts, |view_to| {
        let mut inner_view = view_to.clone();
        inner_view.model = from;
        Emulated {
            inner: make(&inner_view),
            inner_view,
            from,
            to,
            budget,
            slot_plan: vec![Vec::new(); budget as usize],
            staged: Vec::new(),
            es_holding: BTreeMap::new(),
            inner_round: 0,
            inner_halted: false,
        }
    })
}
