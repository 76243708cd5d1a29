//! Engine semantics: validation, arbitration, chunk charging, determinism,
//! and capacity accounting.

use hypersim_core::{Hypergraph, VertexId};
use hypersim_kernel::{
    run, Bandwidth, Inbox, KtLevel, LocalView, ModelKind, NodeProgram, Outbox, Payload,
    RunOptions, SendIntent, SimError,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Word(u64);
impl Payload for Word {
    fn bit_len(&self) -> u64 {
        6
    }
}

struct Silent;
impl NodeProgram for Silent {
    type Msg = Word;
    type Output = ();
    fn step(&mut self, _: &LocalView, _: u64, _: &Inbox<Word>) -> Outbox<Word> {
        Outbox::halting(Vec::new())
    }
    fn finish(&mut self, _: &LocalView) {}
}

fn triangle_edge() -> Hypergraph {
    Hypergraph::build(3, vec![vec![0, 1, 2]]).unwrap()
}

#[test]
fn noop_program_takes_one_round_zero_bits() {
    let h = triangle_edge();
    let out = run(
        &h,
        ModelKind::Eb,
        Bandwidth::default_for(3),
        &RunOptions::default(),
        |_| Silent,
    )
    .unwrap();
    assert_eq!(out.metrics.rounds, 1);
    assert_eq!(out.metrics.total_bits, 0);
    assert_eq!(out.metrics.messages_sent, 0);
}

/// Broadcast own ID once, then halt; output = received (src, value) pairs.
struct IdOnce {
    got: Vec<(usize, u64)>,
}
impl NodeProgram for IdOnce {
    type Msg = Word;
    type Output = Vec<(usize, u64)>;
    fn step(&mut self, view: &LocalView, round: u64, inbox: &Inbox<Word>) -> Outbox<Word> {
        for d in &inbox.deliveries {
            self.got.push((d.src.idx(), d.msg.0));
        }
        match round {
            0 => Outbox::new(
                (0..view.degree())
                    .map(|port| SendIntent::Broadcast {
                        port,
                        msg: Word(view.vertex.idx() as u64),
                    })
                    .collect(),
            ),
            _ => Outbox::halting(Vec::new()),
        }
    }
    fn finish(&mut self, _: &LocalView) -> Self::Output {
        std::mem::take(&mut self.got)
    }
}

#[test]
fn broadcast_once_reaches_whole_edge() {
    let h = triangle_edge();
    let out = run(
        &h,
        ModelKind::Eb,
        Bandwidth::default_for(3),
        &RunOptions::default(),
        |_| IdOnce { got: Vec::new() },
    )
    .unwrap();
    assert_eq!(out.outputs[0], vec![(1, 1), (2, 2)]);
    assert_eq!(out.outputs[1], vec![(0, 0), (2, 2)]);
    assert_eq!(out.outputs[2], vec![(0, 0), (1, 1)]);
    // three broadcasts, one lockstep round each for send and drain
    assert_eq!(out.metrics.messages_sent, 3);
    assert_eq!(out.metrics.rounds, 2);
}

struct Overloaded;
impl NodeProgram for Overloaded {
    type Msg = Word;
    type Output = ();
    fn step(&mut self, view: &LocalView, _: u64, _: &Inbox<Word>) -> Outbox<Word> {
        // four unicasts from a vertex with fewer incident edges
        let mut sends = Vec::new();
        for _ in 0..4 {
            if view.degree() > 0 {
                sends.push(SendIntent::OnEdge {
                    port: 0,
                    dst: view.others(0)[0],
                    msg: Word(0),
                });
            }
        }
        Outbox::new(sends)
    }
    fn finish(&mut self, _: &LocalView) {}
}

#[test]
fn eu_channel_reuse_is_a_model_violation() {
    let h = Hypergraph::build(4, vec![vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
    let err = run(
        &h,
        ModelKind::Eu,
        Bandwidth::default_for(4),
        &RunOptions::default(),
        |_| Overloaded,
    )
    .unwrap_err();
    match err {
        SimError::ModelViolation { vertex, model, .. } => {
            assert_eq!(model, ModelKind::Eu);
            assert_eq!(vertex, 0);
        }
        other => panic!("expected violation, got {other}"),
    }
}

/// Both ends of every edge attempt an ES broadcast in round 0; losers check
/// for the deterministic defeat notice in round 1.
struct Contender {
    lost_ports: Vec<usize>,
    heard: Vec<(usize, u64)>,
}
impl NodeProgram for Contender {
    type Msg = Word;
    type Output = (Vec<usize>, Vec<(usize, u64)>);
    fn step(&mut self, view: &LocalView, round: u64, inbox: &Inbox<Word>) -> Outbox<Word> {
        self.lost_ports.extend(&inbox.lost_arbitration);
        for d in &inbox.deliveries {
            self.heard.push((d.src.idx(), d.msg.0));
        }
        match round {
            0 => Outbox::new(
                (0..view.degree())
                    .map(|port| SendIntent::Broadcast {
                        port,
                        msg: Word(view.vertex.idx() as u64),
                    })
                    .collect(),
            ),
            _ => Outbox::halting(Vec::new()),
        }
    }
    fn finish(&mut self, _: &LocalView) -> Self::Output {
        (
            std::mem::take(&mut self.lost_ports),
            std::mem::take(&mut self.heard),
        )
    }
}

#[test]
fn es_arbitration_prefers_min_id_and_notifies_losers() {
    let h = triangle_edge();
    let out = run(
        &h,
        ModelKind::Es,
        Bandwidth::default_for(3),
        &RunOptions::default(),
        |_| Contender {
            lost_ports: Vec::new(),
            heard: Vec::new(),
        },
    )
    .unwrap();
    let (lost0, heard0) = &out.outputs[0];
    assert!(lost0.is_empty(), "vertex 0 wins");
    assert!(heard0.is_empty(), "winner hears nothing on a single edge");
    for v in [1, 2] {
        let (lost, heard) = &out.outputs[v];
        assert_eq!(lost, &vec![0], "vertex {v} lost on its port 0");
        assert_eq!(heard, &vec![(0, 0)], "vertex {v} heard the winner");
    }
    assert_eq!(out.metrics.messages_sent, 1);
}

struct LongSend;
impl NodeProgram for LongSend {
    type Msg = Blob;
    type Output = ();
    fn step(&mut self, view: &LocalView, round: u64, _: &Inbox<Blob>) -> Outbox<Blob> {
        if round == 0 && view.vertex.idx() == 0 {
            Outbox::halting(vec![SendIntent::Broadcast {
                port: 0,
                msg: Blob(3 * view.bandwidth.bits()),
            }])
        } else {
            Outbox::halting(Vec::new())
        }
    }
    fn finish(&mut self, _: &LocalView) {}
}

#[derive(Clone)]
struct Blob(u64);
impl Payload for Blob {
    fn bit_len(&self) -> u64 {
        self.0
    }
}

#[test]
fn long_payloads_charge_chunked_rounds() {
    let h = triangle_edge();
    let out = run(
        &h,
        ModelKind::Eb,
        Bandwidth::default_for(3),
        &RunOptions::default(),
        |_| LongSend,
    )
    .unwrap();
    assert_eq!(out.metrics.rounds, 3);
}

struct Chatter;
impl NodeProgram for Chatter {
    type Msg = Word;
    type Output = ();
    fn step(&mut self, view: &LocalView, _round: u64, _: &Inbox<Word>) -> Outbox<Word> {
        Outbox::new(
            (0..view.degree())
                .map(|port| SendIntent::Broadcast {
                    port,
                    msg: Word(0),
                })
                .collect(),
        )
    }
    fn finish(&mut self, _: &LocalView) {}
}

#[test]
fn round_budget_exhaustion_reported() {
    let h = triangle_edge();
    let err = run(
        &h,
        ModelKind::Eb,
        Bandwidth::default_for(3),
        &RunOptions::with_max_rounds(5),
        |_| Chatter,
    )
    .unwrap_err();
    assert!(matches!(err, SimError::RoundLimit { max_rounds: 5 }));
}

#[test]
fn capacity_bound_holds_per_model() {
    let h = Hypergraph::build(5, vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4]]).unwrap();
    let bw = Bandwidth::default_for(5);
    for model in [ModelKind::Eb, ModelKind::Es] {
        let out = run(&h, model, bw, &RunOptions::with_max_rounds(40), |_| IdOnce {
            got: Vec::new(),
        });
        let out = out.unwrap();
        let cap = model.capacity_per_round(&h, bw);
        assert!(
            u128::from(out.metrics.total_bits) <= u128::from(out.metrics.rounds) * cap,
            "{model}: {} > {} * {cap}",
            out.metrics.total_bits,
            out.metrics.rounds
        );
    }
}

#[test]
fn identical_runs_are_bit_identical() {
    let h = Hypergraph::build(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5], vec![0, 5]]).unwrap();
    let go = || {
        run(
            &h,
            ModelKind::Eb,
            Bandwidth::default_for(6),
            &RunOptions {
                collect_log: true,
                ..RunOptions::default()
            },
            |_| IdOnce { got: Vec::new() },
        )
        .unwrap()
    };
    let a = go();
    let b = go();
    assert_eq!(a.outputs, b.outputs);
    assert_eq!(a.metrics, b.metrics);
    assert_eq!(a.log.unwrap().to_text(), b.log.unwrap().to_text());
}

#[test]
fn kt0_views_withhold_member_lists() {
    let h = triangle_edge();
    let view = LocalView::build(
        &h,
        VertexId(0),
        ModelKind::Eb,
        Bandwidth::default_for(3),
        KtLevel::Kt0,
    );
    assert_eq!(view.degree(), 1);
    assert!(view.ports[0].members.is_none());
    let kt1 = LocalView::build(
        &h,
        VertexId(0),
        ModelKind::Eb,
        Bandwidth::default_for(3),
        KtLevel::Kt1,
    );
    assert_eq!(kt1.members(0), &[VertexId(0), VertexId(1), VertexId(2)]);
}

#[test]
fn bandwidth_floor_enforced() {
    let h = Hypergraph::build(100, vec![vec![0, 1]]).unwrap();
    let err = run(
        &h,
        ModelKind::Eb,
        Bandwidth::new(3),
        &RunOptions::default(),
        |_| Silent,
    )
    .unwrap_err();
    assert!(matches!(err, SimError::Config(_)));
}
