//! Distributed peeling: the layered-decomposition protocols.
//!
//! `peel` runs `ceil(log2 n)` rounds of 1-bit state broadcasts; a vertex
//! deactivates once at most `2α` incident edges still contain an active
//! vertex other than itself. If `α` is at least the maximum density, all
//! vertices deactivate; a survivor certifies that the maximum density
//! exceeds `α/2`. `parallel_peel` runs the instances `α = 2, 4, 8, ...` in
//! lockstep inside one bit mask per round; `flood` spreads each vertex's
//! smallest successful estimate through its `ceil(log2 n)`-hop neighborhood.

use hypersim_core::combin::value_bits;
use hypersim_core::Hypergraph;
use hypersim_kernel::engine::lockstep_rounds;
use hypersim_kernel::{
    run, Bandwidth, LocalView, Metrics, Payload, RunOptions, SimError,
};

use crate::common::{AlgoModel, EdgeDelivery, EdgeOut, EdgewiseAdapter, EdgewiseProgram};

/// Exact rational deactivation threshold: a vertex peels when
/// `count <= 2 * (num / den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    pub num: u64,
    pub den: u64,
}

impl Threshold {
    pub fn integer(alpha: u64) -> Self {
        Threshold { num: alpha, den: 1 }
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den > 0, "threshold denominator must be positive");
        Threshold { num, den }
    }

    pub fn admits(&self, count: usize) -> bool {
        (count as u128) * (self.den as u128) <= 2 * (self.num as u128)
    }
}

/// Per-vertex result of a peel run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelOutcome {
    pub inactive: bool,
    /// 1-based round of deactivation.
    pub round: Option<u64>,
    /// Ports whose edges still contained active co-members at the
    /// deactivation round (at most `2α` of them).
    pub witness_ports: Vec<usize>,
}

#[derive(Debug, Clone)]
struct StateBit(bool);
impl Payload for StateBit {
    fn bit_len(&self) -> u64 {
        1
    }
}

struct PeelVertex {
    threshold: Threshold,
    total_rounds: u64,
    active: bool,
    outcome: PeelOutcome,
}

impl PeelVertex {
    fn new(threshold: Threshold, total_rounds: u64) -> Self {
        PeelVertex {
            threshold,
            total_rounds,
            active: true,
            outcome: PeelOutcome {
                inactive: false,
                round: None,
                witness_ports: Vec::new(),
            },
        }
    }
}

impl EdgewiseProgram for PeelVertex {
    type Msg = StateBit;
    type Output = PeelOutcome;

    fn round(
        &mut self,
        view: &LocalView,
        round: u64,
        inbox: &[EdgeDelivery<StateBit>],
    ) -> EdgeOut<StateBit> {
        if round >= 1 && self.active {
            let mut active_ports = vec![false; view.degree()];
            for d in inbox {
                if d.msg.0 {
                    active_ports[d.port] = true;
                }
            }
            let witnesses: Vec<usize> = (0..view.degree()).filter(|&p| active_ports[p]).collect();
            if self.threshold.admits(witnesses.len()) {
                self.active = false;
                self.outcome = PeelOutcome {
                    inactive: true,
                    round: Some(round),
                    witness_ports: witnesses,
                };
            }
        }
        if round < self.total_rounds {
            EdgeOut {
                broadcasts: (0..view.degree())
                    .map(|p| (p, StateBit(self.active)))
                    .collect(),
                halt: false,
            }
        } else {
            EdgeOut {
                broadcasts: Vec::new(),
                halt: true,
            }
        }
    }

    fn finish(&mut self, _: &LocalView) -> PeelOutcome {
        self.outcome.clone()
    }
}

/// Uniform peel: every vertex uses the same threshold.
pub fn peel(
    h: &Hypergraph,
    model: AlgoModel,
    alpha: Threshold,
    bw: Bandwidth,
) -> Result<(Vec<PeelOutcome>, Metrics), SimError> {
    nonuniform_peel(h, model, &vec![alpha; h.n()], bw)
}

/// Peel with a per-vertex threshold (the local density estimates β_v).
pub fn nonuniform_peel(
    h: &Hypergraph,
    model: AlgoModel,
    thresholds: &[Threshold],
    bw: Bandwidth,
) -> Result<(Vec<PeelOutcome>, Metrics), SimError> {
    assert_eq!(thresholds.len(), h.n());
    let rounds = lockstep_rounds(h.n());
    let out = run(
        h,
        model.kind(),
        bw,
        &RunOptions::with_max_rounds(16 * (rounds + 2)),
        |view: &LocalView| {
            EdgewiseAdapter::new(PeelVertex::new(thresholds[view.vertex.idx()], rounds))
        },
    )?;
    Ok((out.outputs, out.metrics))
}

#[derive(Debug, Clone)]
struct MaskMsg {
    mask: u64,
    width: u8,
}
impl Payload for MaskMsg {
    fn bit_len(&self) -> u64 {
        self.width as u64
    }
}

struct ParallelPeelVertex {
    instances: u32,
    total_rounds: u64,
    active_mask: u64,
}

impl EdgewiseProgram for ParallelPeelVertex {
    type Msg = MaskMsg;
    type Output = Option<u64>;

    fn round(
        &mut self,
        view: &LocalView,
        round: u64,
        inbox: &[EdgeDelivery<MaskMsg>],
    ) -> EdgeOut<MaskMsg> {
        if round >= 1 {
            let mut port_or = vec![0u64; view.degree()];
            for d in inbox {
                port_or[d.port] |= d.msg.mask;
            }
            for i in 1..=self.instances {
                let bit = 1u64 << (i - 1);
                if self.active_mask & bit == 0 {
                    continue;
                }
                let count = port_or.iter().filter(|&&m| m & bit != 0).count();
                // threshold 2 * 2^i
                if (count as u128) <= 2u128 << i {
                    self.active_mask &= !bit;
                }
            }
        }
        if round < self.total_rounds {
            EdgeOut {
                broadcasts: (0..view.degree())
                    .map(|p| {
                        (
                            p,
                            MaskMsg {
                                mask: self.active_mask,
                                width: self.instances as u8,
                            },
                        )
                    })
                    .collect(),
                halt: false,
            }
        } else {
            EdgeOut {
                broadcasts: Vec::new(),
                halt: true,
            }
        }
    }

    fn finish(&mut self, _: &LocalView) -> Option<u64> {
        (1..=self.instances)
            .find(|&i| self.active_mask & (1 << (i - 1)) == 0)
            .map(|i| 1u64 << i)
    }
}

/// Number of geometric instances for an a-priori density bound `m_bound`.
fn instance_count(m_bound: u128) -> u32 {
    // smallest k with 2^k >= m_bound, clamped to one mask word
    let mut k = 1u32;
    while (1u128 << k) < m_bound && k < 63 {
        k += 1;
    }
    k
}

/// Runs `Peel(2^i)` for `i = 1..=ceil(log2 M)` in parallel, one activity bit
/// per instance per broadcast. Returns each vertex's smallest successful
/// estimate `α_v`; `None` (reported, never expected when `M >= μ(H)`) means
/// every instance left the vertex active.
pub fn parallel_peel(
    h: &Hypergraph,
    model: AlgoModel,
    m_bound: u128,
    bw: Bandwidth,
) -> Result<(Vec<Option<u64>>, Metrics), SimError> {
    let rounds = lockstep_rounds(h.n());
    let instances = instance_count(m_bound);
    let out = run(
        h,
        model.kind(),
        bw,
        &RunOptions::with_max_rounds(16 * (rounds + 2) * instances as u64),
        |_| {
            EdgewiseAdapter::new(ParallelPeelVertex {
                instances,
                total_rounds: rounds,
                active_mask: u64::MAX >> (64 - instances.max(1)),
            })
        },
    )?;
    Ok((out.outputs, out.metrics))
}

#[derive(Debug, Clone)]
struct ValueMsg(u64);
impl Payload for ValueMsg {
    fn bit_len(&self) -> u64 {
        value_bits(self.0)
    }
}

struct FloodVertex {
    best: u64,
    total_rounds: u64,
}

impl EdgewiseProgram for FloodVertex {
    type Msg = ValueMsg;
    type Output = u64;

    fn round(
        &mut self,
        view: &LocalView,
        round: u64,
        inbox: &[EdgeDelivery<ValueMsg>],
    ) -> EdgeOut<ValueMsg> {
        for d in inbox {
            self.best = self.best.max(d.msg.0);
        }
        if round < self.total_rounds {
            EdgeOut {
                broadcasts: (0..view.degree()).map(|p| (p, ValueMsg(self.best))).collect(),
                halt: false,
            }
        } else {
            EdgeOut {
                broadcasts: Vec::new(),
                halt: true,
            }
        }
    }

    fn finish(&mut self, _: &LocalView) -> u64 {
        self.best
    }
}

/// `ceil(log2 n)` rounds of max-propagation over the primal neighborhood:
/// β_v = max α_u over all u within that many hops of v.
pub fn flood(
    h: &Hypergraph,
    model: AlgoModel,
    alphas: &[u64],
    bw: Bandwidth,
) -> Result<(Vec<u64>, Metrics), SimError> {
    assert_eq!(alphas.len(), h.n());
    let rounds = lockstep_rounds(h.n());
    let out = run(
        h,
        model.kind(),
        bw,
        &RunOptions::with_max_rounds(16 * (rounds + 2)),
        |view: &LocalView| {
            EdgewiseAdapter::new(FloodVertex {
                best: alphas[view.vertex.idx()],
                total_rounds: rounds,
            })
        },
    )?;
    Ok((out.outputs, out.metrics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypersim_core::sample_uniform_random;

    fn star() -> Hypergraph {
        Hypergraph::build(6, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![0, 4], vec![0, 5]])
            .unwrap()
    }

    fn k4() -> Hypergraph {
        Hypergraph::build(
            4,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn star_peels_in_two_rounds() {
        let h = star();
        let (out, _) = peel(&h, AlgoModel::Eb, Threshold::integer(2), Bandwidth::default_for(6))
            .unwrap();
        for leaf in 1..6 {
            assert_eq!(out[leaf].round, Some(1), "leaf {leaf}");
        }
        assert_eq!(out[0].round, Some(2), "center peels second");
        assert!(out[0].witness_ports.is_empty(), "no active co-members remain");
    }

    #[test]
    fn low_degree_peels_immediately() {
        let h = star();
        // Δ = 5 <= 2α for α = 3 (say): every vertex inactive in round 1
        let (out, _) = peel(&h, AlgoModel::Eb, Threshold::integer(3), Bandwidth::default_for(6))
            .unwrap();
        assert!(out.iter().all(|o| o.round == Some(1)));
    }

    #[test]
    fn k4_with_small_alpha_fails_and_certifies_density() {
        let h = k4();
        let (out, _) = peel(&h, AlgoModel::Eb, Threshold::integer(1), Bandwidth::default_for(4))
            .unwrap();
        assert!(out.iter().any(|o| !o.inactive));
        // exact maximum density of K4 is 3 > alpha / 2
        let mu = hypersim_core::max_density_exact(&h).unwrap();
        assert!(mu > num::rational::Ratio::new(num::BigInt::from(1), num::BigInt::from(2)));
    }

    #[test]
    fn pc_and_eb_agree() {
        let h = sample_uniform_random(9, 3, 0.4, 11).unwrap();
        let bw = Bandwidth::default_for(9);
        let (eb, _) = peel(&h, AlgoModel::Eb, Threshold::integer(2), bw).unwrap();
        let (pc, _) = peel(&h, AlgoModel::Pc, Threshold::integer(2), bw).unwrap();
        assert_eq!(eb, pc);
    }

    #[test]
    fn parallel_peel_minimal_instance_on_low_degree() {
        let h = Hypergraph::build(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let (alphas, _) =
            parallel_peel(&h, AlgoModel::Eb, 16, Bandwidth::default_for(4)).unwrap();
        // Δ <= 2: the first instance (α = 2) succeeds everywhere
        assert!(alphas.iter().all(|a| *a == Some(2)));
    }

    #[test]
    fn parallel_peel_k4_bounded_by_four_mu() {
        let h = k4();
        let (alphas, _) =
            parallel_peel(&h, AlgoModel::Eb, 64, Bandwidth::default_for(4)).unwrap();
        let max = alphas.iter().map(|a| a.unwrap()).max().unwrap();
        // degree 3 <= 2 * 2, so the very first instance succeeds
        assert_eq!(max, 2);
        assert!(max <= 4 * 3, "4-approximation of mu = 3");
        // uniform peel with the returned maximum succeeds
        let (out, _) = peel(&h, AlgoModel::Eb, Threshold::integer(max), Bandwidth::default_for(4))
            .unwrap();
        assert!(out.iter().all(|o| o.inactive));
    }

    #[test]
    fn flood_spreads_the_maximum() {
        let h = star();
        let mut alphas = vec![2u64; 6];
        alphas[3] = 8;
        let (betas, _) = flood(&h, AlgoModel::Eb, &alphas, Bandwidth::default_for(6)).unwrap();
        assert!(betas.iter().all(|&b| b == 8), "diameter 2 <= rounds");
        let uniform = vec![5u64; 6];
        let (betas, _) = flood(&h, AlgoModel::Eb, &uniform, Bandwidth::default_for(6)).unwrap();
        assert!(betas.iter().all(|&b| b == 5));
    }

    #[test]
    fn pipeline_peels_everything() {
        for seed in 0..20u64 {
            let h = sample_uniform_random(10, 3, 0.5, seed).unwrap();
            let bw = Bandwidth::default_for(10);
            let m = hypersim_core::combin::binomial_u128(10, 3).unwrap();
            let (alphas, _) = parallel_peel(&h, AlgoModel::Eb, m, bw).unwrap();
            let alphas: Vec<u64> = alphas.iter().map(|a| a.expect("bounded by M")).collect();
            let (betas, _) = flood(&h, AlgoModel::Eb, &alphas, bw).unwrap();
            let thresholds: Vec<Threshold> =
                betas.iter().map(|&b| Threshold::integer(b)).collect();
            let (out, _) = nonuniform_peel(&h, AlgoModel::Eb, &thresholds, bw).unwrap();
            assert!(out.iter().all(|o| o.inactive), "seed {seed}");
        }
    }
}
