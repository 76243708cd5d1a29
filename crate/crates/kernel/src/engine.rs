//! The lockstep executor: validate, arbitrate, charge, deliver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use hypersim_core::combin::ceil_log2;
use hypersim_core::{Hypergraph, VertexId};

use crate::chunk::charge_rounds;
use crate::message::{Delivery, Inbox, Outbox, Payload, SendIntent, Via};
use crate::metrics::Metrics;
use crate::model::{Bandwidth, ModelKind};
use crate::view::{KtLevel, LocalView};

/// A per-vertex automaton. Constructed from its local view (outside this
/// trait, by the closure handed to [`run`]), stepped once per round, and
/// asked for its output after it halts.
pub trait NodeProgram {
    type Msg: Payload;
    type Output;

    fn step(&mut self, view: &LocalView, round: u64, inbox: &Inbox<Self::Msg>) -> Outbox<Self::Msg>;

    fn finish(&mut self, view: &LocalView) -> Self::Output;
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("round {round}, vertex {vertex}: outbox violates {model}: {detail}")]
    ModelViolation {
        round: u64,
        vertex: usize,
        model: ModelKind,
        detail: String,
    },
    #[error("round budget of {max_rounds} exhausted without global halt")]
    RoundLimit { max_rounds: u64 },
    #[error("round {round}, vertex {vertex}: {detail}")]
    ProgramFailure {
        round: u64,
        vertex: usize,
        detail: String,
    },
    #[error("configuration error: {0}")]
    Config(String),
}

/// Static lookup tables shared by validation and delivery.
pub struct Network<'a> {
    pub h: &'a Hypergraph,
    primal: Vec<BTreeSet<VertexId>>,
}

impl<'a> Network<'a> {
    pub fn new(h: &'a Hypergraph) -> Self {
        Network {
            h,
            primal: h.primal_adjacency(),
        }
    }

    pub fn is_primal_neighbor(&self, v: VertexId, w: VertexId) -> bool {
        self.primal[v.idx()].contains(&w)
    }

    fn edge_of_port(&self, v: VertexId, port: usize) -> Option<usize> {
        self.h.incident(v).get(port).copied()
    }

    /// The receiver-side port for a global edge index; incidence lists are in
    /// edge order, so this is a binary search.
    fn port_of_edge(&self, v: VertexId, edge: usize) -> usize {
        self.h
            .incident(v)
            .binary_search(&edge)
            .expect("vertex is a member of the edge")
    }
}

/// Checks a single vertex's outbox against the active model. Returns the
/// first violated constraint.
pub fn validate_outbox<M: Payload>(
    net: &Network,
    model: ModelKind,
    vertex: VertexId,
    sends: &[SendIntent<M>],
) -> Result<(), String> {
    let n = net.h.n();
    let deg = net.h.degree(vertex);
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new(); // channel keys
    for send in sends {
        match (model, send) {
            (ModelKind::Clique, SendIntent::ToVertex { dst, .. }) => {
                if dst.idx() >= n || *dst == vertex {
                    return Err(format!("illegal CLIQUE target {dst}"));
                }
                if !used.insert((dst.idx(), 0)) {
                    return Err(format!("two messages to vertex {dst} in one round"));
                }
            }
            (ModelKind::Pc, SendIntent::ToVertex { dst, .. }) => {
                if dst.idx() >= n || !net.is_primal_neighbor(vertex, *dst) {
                    return Err(format!("{dst} is not a primal neighbor"));
                }
                if !used.insert((dst.idx(), 0)) {
                    return Err(format!("two messages to neighbor {dst} in one round"));
                }
            }
            (ModelKind::Ec, SendIntent::OnEdge { port, dst, .. }) => {
                check_edge_target(net, vertex, *port, *dst, deg)?;
                if !used.insert((*port, dst.idx() + 1)) {
                    return Err(format!(
                        "two messages to {dst} on port {port} in one round"
                    ));
                }
            }
            (
                ModelKind::Eu | ModelKind::Ep,
                SendIntent::OnEdge { port, dst, .. },
            ) => {
                check_edge_target(net, vertex, *port, *dst, deg)?;
                if !used.insert((*port, 0)) {
                    return Err(format!("two sends on port {port} in one round"));
                }
            }
            (ModelKind::Eb | ModelKind::Es, SendIntent::Broadcast { port, .. }) => {
                if *port >= deg {
                    return Err(format!("port {port} out of range (degree {deg})"));
                }
                if !used.insert((*port, 0)) {
                    return Err(format!("two broadcasts on port {port} in one round"));
                }
            }
            (model, send) => {
                let kind = match send {
                    SendIntent::ToVertex { .. } => "vertex-addressed send",
                    SendIntent::OnEdge { .. } => "edge unicast",
                    SendIntent::Broadcast { .. } => "edge broadcast",
                };
                return Err(format!("{kind} is not a legal {model} intent"));
            }
        }
    }
    Ok(())
}

fn check_edge_target(
    net: &Network,
    vertex: VertexId,
    port: usize,
    dst: VertexId,
    deg: usize,
) -> Result<(), String> {
    if port >= deg {
        return Err(format!("port {port} out of range (degree {deg})"));
    }
    let edge = net.edge_of_port(vertex, port).expect("port checked");
    if dst == vertex || !net.h.edge_contains(edge, dst) {
        return Err(format!("{dst} is not a co-member of port {port}"));
    }
    Ok(())
}

/// Structured address recorded in the round log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogAddr {
    Vertex(usize),
    EdgeTo { port: usize, dst: usize },
    EdgeBroadcast { port: usize },
}

impl fmt::Display for LogAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogAddr::Vertex(v) => write!(f, "vertex:{v}"),
            LogAddr::EdgeTo { port, dst } => write!(f, "edge:{port}:to:{dst}"),
            LogAddr::EdgeBroadcast { port } => write!(f, "edge:{port}:broadcast"),
        }
    }
}

/// One accepted message, one line: `round=.. model=.. src=.. addr=.. bits=..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRecord {
    pub round: u64,
    pub model: ModelKind,
    pub src: usize,
    pub addr: LogAddr,
    pub bits: u64,
}

impl fmt::Display for LogRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "round={} model={} src={} addr={} bits={}",
            self.round, self.model, self.src, self.addr, self.bits
        )
    }
}

impl LogRecord {
    pub fn parse(line: &str) -> Result<Self, String> {
        let mut kv = BTreeMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| format!("bad token {tok}"))?;
            kv.insert(k, v);
        }
        let round = kv
            .get("round")
            .and_then(|v| v.parse().ok())
            .ok_or("missing round")?;
        let model = kv
            .get("model")
            .ok_or("missing model")?
            .parse::<ModelKind>()?;
        let src = kv.get("src").and_then(|v| v.parse().ok()).ok_or("missing src")?;
        let bits = kv.get("bits").and_then(|v| v.parse().ok()).ok_or("missing bits")?;
        let addr_raw = kv.get("addr").ok_or("missing addr")?;
        let parts: Vec<&str> = addr_raw.split(':').collect();
        let addr = match parts.as_slice() {
            ["vertex", v] => LogAddr::Vertex(v.parse().map_err(|_| "bad vertex")?),
            ["edge", p, "to", d] => LogAddr::EdgeTo {
                port: p.parse().map_err(|_| "bad port")?,
                dst: d.parse().map_err(|_| "bad dst")?,
            },
            ["edge", p, "broadcast"] => LogAddr::EdgeBroadcast {
                port: p.parse().map_err(|_| "bad port")?,
            },
            _ => return Err(format!("bad addr {addr_raw}")),
        };
        Ok(LogRecord {
            round,
            model,
            src,
            addr,
            bits,
        })
    }
}

/// Line-delimited record of every accepted message, grouped by lockstep
/// round, for replay verification.
#[derive(Debug, Clone, Default)]
pub struct RoundLog {
    pub records: Vec<LogRecord>,
}

impl RoundLog {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut records = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            records.push(LogRecord::parse(line)?);
        }
        Ok(RoundLog { records })
    }

    /// Re-validates every logged round: groups records by round and vertex
    /// and runs each reconstructed outbox through [`validate_outbox`].
    /// Payload content is irrelevant for legality, so a unit payload of the
    /// logged size stands in.
    pub fn replay_validate(&self, h: &Hypergraph) -> Result<u64, String> {
        #[derive(Clone)]
        struct Sized(u64);
        impl Payload for Sized {
            fn bit_len(&self) -> u64 {
                self.0
            }
        }
        let net = Network::new(h);
        let mut by_round: BTreeMap<u64, BTreeMap<usize, Vec<SendIntent<Sized>>>> = BTreeMap::new();
        for rec in &self.records {
            let intent = match rec.addr {
                LogAddr::Vertex(dst) => SendIntent::ToVertex {
                    dst: VertexId(dst),
                    msg: Sized(rec.bits),
                },
                LogAddr::EdgeTo { port, dst } => SendIntent::OnEdge {
                    port,
                    dst: VertexId(dst),
                    msg: Sized(rec.bits),
                },
                LogAddr::EdgeBroadcast { port } => SendIntent::Broadcast {
                    port,
                    msg: Sized(rec.bits),
                },
            };
            by_round
                .entry(rec.round)
                .or_default()
                .entry(rec.src)
                .or_default()
                .push(intent);
        }
        let model = self
            .records
            .first()
            .map(|r| r.model)
            .ok_or("empty round log")?;
        let mut rounds = 0;
        for (round, vertices) in &by_round {
            for (src, sends) in vertices {
                validate_outbox(&net, model, VertexId(*src), sends)
                    .map_err(|e| format!("round {round}, vertex {src}: {e}"))?;
            }
            rounds += 1;
        }
        Ok(rounds)
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_rounds: u64,
    pub kt: KtLevel,
    pub collect_log: bool,
}

impl RunOptions {
    pub fn with_max_rounds(max_rounds: u64) -> Self {
        RunOptions {
            max_rounds,
            kt: KtLevel::Kt1,
            collect_log: false,
        }
    }
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions::with_max_rounds(1_000_000)
    }
}

#[derive(Debug)]
pub struct RunOutput<O> {
    pub outputs: Vec<O>,
    pub metrics: Metrics,
    pub log: Option<RoundLog>,
}

/// Executes `make(view)`-built programs on every vertex in lockstep until
/// all halt. Identical inputs produce identical outputs and metrics.
pub fn run<P, F>(
    h: &Hypergraph,
    model: ModelKind,
    bw: Bandwidth,
    opts: &RunOptions,
    mut make: F,
) -> Result<RunOutput<P::Output>, SimError>
where
    P: NodeProgram,
    F: FnMut(&LocalView) -> P,
{
    if !bw.accommodates(h.n()) {
        return Err(SimError::Config(format!(
            "bandwidth {} below ceil(log2 {}) bits",
            bw.bits(),
            h.n()
        )));
    }
    if opts.max_rounds == 0 {
        return Err(SimError::Config("max_rounds must be at least 1".into()));
    }
    let n = h.n();
    let net = Network::new(h);
    let views: Vec<LocalView> = (0..n)
        .map(|v| LocalView::build(h, VertexId(v), model, bw, opts.kt))
        .collect();
    let mut programs: Vec<P> = views.iter().map(|v| make(v)).collect();
    let mut halted = vec![false; n];
    let mut outputs: Vec<Option<P::Output>> = (0..n).map(|_| None).collect();
    let mut inboxes: Vec<Inbox<P::Msg>> = (0..n).map(|_| Inbox::empty()).collect();
    let mut metrics = Metrics::new(n);
    let mut log = opts.collect_log.then(RoundLog::default);

    let mut round: u64 = 0;
    while halted.iter().any(|&hd| !hd) {
        // 1. step every active vertex
        let mut outboxes: Vec<Option<Outbox<P::Msg>>> = (0..n).map(|_| None).collect();
        for v in 0..n {
            if halted[v] {
                continue;
            }
            let inbox = std::mem::replace(&mut inboxes[v], Inbox::empty());
            let out = programs[v].step(&views[v], round, &inbox);
            if let Some(detail) = &out.fail {
                return Err(SimError::ProgramFailure {
                    round,
                    vertex: v,
                    detail: detail.clone(),
                });
            }
            outboxes[v] = Some(out);
        }

        // 2. validate against the model
        for (v, outbox) in outboxes.iter().enumerate() {
            if let Some(outbox) = outbox {
                validate_outbox(&net, model, VertexId(v), &outbox.sends).map_err(|detail| {
                    SimError::ModelViolation {
                        round,
                        vertex: v,
                        model,
                        detail,
                    }
                })?;
            }
        }

        // 3. ES/EP arbitration: per contested edge the minimum-ID sender (and
        // for EP its chosen partner's reply) wins; losers are notified next
        // round.
        let mut accepted: Vec<(VertexId, SendIntent<P::Msg>)> = Vec::new();
        let mut losses: Vec<(usize, usize)> = Vec::new(); // (vertex, its port)
        match model {
            ModelKind::Es | ModelKind::Ep => {
                let mut per_edge: BTreeMap<usize, Vec<(VertexId, usize, SendIntent<P::Msg>)>> =
                    BTreeMap::new();
                for (v, outbox) in outboxes.iter().enumerate() {
                    let Some(outbox) = outbox else { continue };
                    for send in &outbox.sends {
                        let port = match send {
                            SendIntent::Broadcast { port, .. } | SendIntent::OnEdge { port, .. } => {
                                *port
                            }
                            SendIntent::ToVertex { .. } => unreachable!("validated above"),
                        };
                        let edge = net.edge_of_port(VertexId(v), port).expect("validated");
                        per_edge
                            .entry(edge)
                            .or_default()
                            .push((VertexId(v), port, send.clone()));
                    }
                }
                for (_edge, mut attempts) in per_edge {
                    attempts.sort_by_key(|(src, ..)| *src);
                    let winner = attempts[0].0;
                    let partner = match &attempts[0].2 {
                        SendIntent::OnEdge { dst, .. } => Some(*dst),
                        _ => None,
                    };
                    for (src, port, send) in attempts {
                        let wins = src == winner
                            || (model == ModelKind::Ep
                                && Some(src) == partner
                                && matches!(&send, SendIntent::OnEdge { dst, .. } if *dst == winner));
                        if wins {
                            accepted.push((src, send));
                        } else {
                            losses.push((src.idx(), port));
                        }
                    }
                }
            }
            _ => {
                for (v, outbox) in outboxes.iter_mut().enumerate() {
                    if let Some(outbox) = outbox {
                        for send in outbox.sends.drain(..) {
                            accepted.push((VertexId(v), send));
                        }
                    }
                }
            }
        }

        // 4. charge rounds: the slowest channel paces the lockstep round
        let cost = accepted
            .iter()
            .map(|(_, s)| charge_rounds(s.msg().bit_len(), bw))
            .max()
            .unwrap_or(0)
            .max(1);
        metrics.rounds += cost;

        // 5. deliver and account
        for (src, send) in &accepted {
            let bits = send.msg().bit_len();
            metrics.messages_sent += 1;
            metrics.total_bits += bits;
            metrics.sent_messages[src.idx()] += 1;
            if let Some(log) = log.as_mut() {
                let addr = match send {
                    SendIntent::ToVertex { dst, .. } => LogAddr::Vertex(dst.idx()),
                    SendIntent::OnEdge { port, dst, .. } => LogAddr::EdgeTo {
                        port: *port,
                        dst: dst.idx(),
                    },
                    SendIntent::Broadcast { port, .. } => LogAddr::EdgeBroadcast { port: *port },
                };
                log.records.push(LogRecord {
                    round,
                    model,
                    src: src.idx(),
                    addr,
                    bits,
                });
            }
            let mut deliver = |dst: VertexId, via: Via, msg: P::Msg| {
                metrics.received_messages[dst.idx()] += 1;
                metrics.received_bits[dst.idx()] += bits;
                inboxes[dst.idx()].deliveries.push(Delivery {
                    src: *src,
                    via,
                    msg,
                });
            };
            match send {
                SendIntent::ToVertex { dst, msg } => deliver(*dst, Via::Direct, msg.clone()),
                SendIntent::OnEdge { port, dst, msg } => {
                    let edge = net.edge_of_port(*src, *port).expect("validated");
                    deliver(*dst, Via::Edge { port: net.port_of_edge(*dst, edge) }, msg.clone());
                }
                SendIntent::Broadcast { port, msg } => {
                    let edge = net.edge_of_port(*src, *port).expect("validated");
                    for &w in net.h.edge(edge) {
                        if w != *src {
                            deliver(w, Via::Edge { port: net.port_of_edge(w, edge) }, msg.clone());
                        }
                    }
                }
            }
        }
        for (v, port) in losses {
            inboxes[v].lost_arbitration.push(port);
        }
        for inbox in inboxes.iter_mut() {
            inbox
                .deliveries
                .sort_by(|a, b| (a.src, a.via).cmp(&(b.src, b.via)));
            inbox.lost_arbitration.sort_unstable();
        }

        // 6. halt transitions
        for (v, outbox) in outboxes.into_iter().enumerate() {
            if let Some(outbox) = outbox {
                if outbox.halt {
                    halted[v] = true;
                    outputs[v] = Some(programs[v].finish(&views[v]));
                }
            }
        }

        round += 1;
        if halted.iter().any(|&hd| !hd) && metrics.rounds >= opts.max_rounds {
            return Err(SimError::RoundLimit {
                max_rounds: opts.max_rounds,
            });
        }
    }
    metrics.finalize();
    Ok(RunOutput {
        outputs: outputs.into_iter().map(|o| o.expect("all halted")).collect(),
        metrics,
        log,
    })
}

/// Rounds used by the peel-style protocols on `n` vertices.
pub fn lockstep_rounds(n: usize) -> u64 {
    ceil_log2(n.max(2)) as u64
}
