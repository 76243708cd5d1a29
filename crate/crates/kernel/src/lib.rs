//! Deterministic synchronous round engine.
//!
//! A [`NodeProgram`] is a per-vertex automaton: it is constructed from its
//! local view of the network, consumes one inbox and produces one outbox per
//! round, and eventually halts with an output. The engine executes all
//! vertices in lockstep under one of the seven communication models,
//! validates every outbox against the model's per-round constraints, chunks
//! long logical payloads into bandwidth-sized frames when charging rounds,
//! and accounts rounds, messages, and bits.

pub mod chunk;
pub mod engine;
pub mod message;
pub mod metrics;
pub mod model;
pub mod route;
pub mod simulate;
pub mod solocast;
pub mod view;

pub use chunk::charge_rounds;
pub use engine::{
    run, validate_outbox, LogRecord, Network, NodeProgram, RoundLog, RunOptions, RunOutput,
    SimError,
};
pub use message::{Delivery, Inbox, Outbox, Payload, SendIntent, Via};
pub use metrics::Metrics;
pub use model::{Bandwidth, ModelKind};
pub use route::{clique_route, execute_schedule, Demand, Leg, RouteHop, RouteSchedule, RoutedDelivery};
pub use simulate::{emulation_budget, run_emulated, EmuMsg};
pub use solocast::{solocast_over_unicast, SolocastSchedule};
pub use view::{KtLevel, LocalView, PortInfo};
