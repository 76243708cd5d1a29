//! Message plumbing shared by programs and the engine.

use hypersim_core::VertexId;

/// A logical payload with a declared bit size. Addressing and framing are
/// kernel metadata and are not counted; the kernel chunks payloads longer
/// than the bandwidth into consecutive frames when charging rounds.
pub trait Payload: Clone {
    fn bit_len(&self) -> u64;
}

impl Payload for () {
    fn bit_len(&self) -> u64 {
        0
    }
}

/// One logical send produced by a program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SendIntent<M> {
    /// Direct vertex addressing (CLIQUE, PC).
    ToVertex { dst: VertexId, msg: M },
    /// Unicast on an incident edge (EC, EU, EP).
    OnEdge { port: usize, dst: VertexId, msg: M },
    /// Broadcast on an incident edge (EB, ES).
    Broadcast { port: usize, msg: M },
}

impl<M> SendIntent<M> {
    pub fn msg(&self) -> &M {
        match self {
            SendIntent::ToVertex { msg, .. }
            | SendIntent::OnEdge { msg, .. }
            | SendIntent::Broadcast { msg, .. } => msg,
        }
    }
}

/// Everything a vertex emits in one round.
#[derive(Debug, Clone)]
pub struct Outbox<M> {
    pub sends: Vec<SendIntent<M>>,
    /// Signals that this vertex has produced its final output.
    pub halt: bool,
    /// A program-level failure; the engine aborts the run with it.
    pub fail: Option<String>,
}

impl<M> Outbox<M> {
    pub fn new(sends: Vec<SendIntent<M>>) -> Self {
        Outbox {
            sends,
            halt: false,
            fail: None,
        }
    }

    pub fn silent() -> Self {
        Outbox::new(Vec::new())
    }

    pub fn halting(sends: Vec<SendIntent<M>>) -> Self {
        Outbox {
            sends,
            halt: true,
            fail: None,
        }
    }

    pub fn failed(detail: String) -> Self {
        Outbox {
            sends: Vec::new(),
            halt: false,
            fail: Some(detail),
        }
    }
}

/// How a delivery reached the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Via {
    /// Direct vertex addressing (CLIQUE, PC).
    Direct,
    /// Through an edge; `port` is the receiver's own port for that edge.
    Edge { port: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery<M> {
    pub src: VertexId,
    pub via: Via,
    pub msg: M,
}

/// All deliveries for one vertex in one round, sorted by `(src, via)`, plus
/// deterministic loss notices for ES/EP arbitration defeats in the previous
/// round (the receiver-side port of the contested edge).
#[derive(Debug, Clone)]
pub struct Inbox<M> {
    pub deliveries: Vec<Delivery<M>>,
    pub lost_arbitration: Vec<usize>,
}

impl<M> Inbox<M> {
    pub fn empty() -> Self {
        Inbox {
            deliveries: Vec::new(),
            lost_arbitration: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.deliveries.is_empty() && self.lost_arbitration.is_empty()
    }
}
