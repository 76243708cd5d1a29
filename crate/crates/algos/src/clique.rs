//! Triangle enumeration in the CLIQUE model.
//!
//! Every vertex `v` encodes, for each other vertex `u`, which of the
//! candidate edges containing `{v, u}` are present, as one bit vector over
//! the colexicographic enumeration of the remaining vertex subsets. The
//! vector travels to the owners of every triple class whose digits contain
//! both blocks, via the deterministic CLIQUE router. Each owner then scans
//! its triple classes and outputs the triangles whose sorted orientation it
//! owns. Non-uniform inputs run one pass per edge cardinality.

use std::collections::{BTreeMap, BTreeSet};

use hypersim_core::combin::{binomial_u128, colex_rank, colex_unrank};
use hypersim_core::{Hypergraph, Triangle, TriangleClass, VertexId};
use hypersim_kernel::{
    clique_route, execute_schedule, Bandwidth, Demand, Metrics, Payload, RoundLog, SimError,
};

use crate::common::EnumerationRun;
use crate::partition::{destination_set, TriplePartition};

#[derive(Debug, Clone)]
struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.words[i / 64] & (1 << (i % 64)) != 0)
    }
}

impl Payload for BitVec {
    fn bit_len(&self) -> u64 {
        self.len as u64
    }
}

/// Result of a CLIQUE-model run: per-vertex outputs plus routing accounting.
#[derive(Debug)]
pub struct CliqueRun {
    pub class: TriangleClass,
    pub per_vertex: Vec<BTreeSet<Triangle>>,
    pub metrics: Metrics,
    /// Logical pair-vector messages sourced by each vertex, summed over
    /// passes (the quantity bounded by `6 (n-1) ceil(n^(1/3))`).
    pub demands_per_vertex: Vec<usize>,
    /// (physical rounds, guarantee) per pass.
    pub route_rounds: Vec<(u64, u64)>,
    pub logs: Vec<RoundLog>,
}

impl CliqueRun {
    pub fn into_enumeration(self) -> EnumerationRun {
        EnumerationRun {
            class: self.class,
            per_vertex: self.per_vertex,
            metrics: self.metrics,
        }
    }
}

/// Runs the partition-and-route algorithm. The hypergraph's edge list must
/// be set-like (no duplicate vertex sets): decoded edges are matched back to
/// indices by their sets.
pub fn clique_enumerate(
    h: &Hypergraph,
    class: TriangleClass,
    bw: Bandwidth,
    collect_log: bool,
) -> Result<CliqueRun, SimError> {
    let n = h.n();
    let part = TriplePartition::new(n.max(1));
    let mut set_to_index: BTreeMap<&[VertexId], usize> = BTreeMap::new();
    for (idx, edge) in h.edges().iter().enumerate() {
        if set_to_index.insert(edge.as_slice(), idx).is_some() {
            return Err(SimError::Config(
                "clique enumeration needs distinct edge sets".into(),
            ));
        }
    }

    let mut metrics = Metrics::new(n);
    let mut demands_per_vertex = vec![0usize; n];
    let mut route_rounds = Vec::new();
    let mut logs = Vec::new();
    // edges known to each vertex after decoding, as sorted vertex lists
    let mut decoded: Vec<BTreeSet<Vec<VertexId>>> = vec![BTreeSet::new(); n];

    let mut sizes: Vec<usize> = h.edges().iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes.dedup();

    for r_pass in sizes {
        let universe = n - 2;
        let vec_len = binomial_u128(universe, r_pass - 2)
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| {
                SimError::Config(format!("bit vector for rank {r_pass} does not fit"))
            })?;
        // demands: b_{v,u} to every destination of the block pair
        let mut demands = Vec::new();
        let mut infos: Vec<(VertexId, VertexId)> = Vec::new();
        let mut payloads = Vec::new();
        for v in (0..n).map(VertexId) {
            let mut vectors: BTreeMap<VertexId, BitVec> = BTreeMap::new();
            for &e in h.incident(v) {
                let edge = h.edge(e);
                if edge.len() != r_pass {
                    continue;
                }
                for &u in edge {
                    if u == v {
                        continue;
                    }
                    let others: Vec<usize> = edge
                        .iter()
                        .filter(|&&w| w != v && w != u)
                        .map(|w| reduced_position(n, v, u, *w))
                        .collect();
                    let bit = colex_rank(&others) as usize;
                    vectors
                        .entry(u)
                        .or_insert_with(|| BitVec::zeros(vec_len))
                        .set(bit);
                }
            }
            for u in (0..n).map(VertexId) {
                if u == v {
                    continue;
                }
                let vector = vectors
                    .remove(&u)
                    .unwrap_or_else(|| BitVec::zeros(vec_len));
                for w in destination_set(&part, part.block_of(v), part.block_of(u)) {
                    demands.push(Demand {
                        src: v,
                        dst: w,
                        bits: vec_len as u64,
                    });
                    infos.push((v, u));
                    payloads.push(vector.clone());
                    demands_per_vertex[v.idx()] += 1;
                }
            }
        }
        let schedule = clique_route(&demands, n, bw);
        route_rounds.push((schedule.physical_rounds, schedule.guarantee));
        let (deliveries, pass_metrics, log) =
            execute_schedule(h, bw, &schedule, &demands, &payloads, collect_log)?;
        metrics.merge(&pass_metrics);
        if let Some(log) = log {
            logs.push(log);
        }
        for (w, delivered) in deliveries.into_iter().enumerate() {
            for d in delivered {
                let (v, u) = infos[d.demand];
                for bit in d.msg.ones() {
                    let others = colex_unrank(bit as u128, r_pass - 2, universe);
                    let mut edge: Vec<VertexId> = others
                        .into_iter()
                        .map(|pos| reduced_unposition(n, v, u, pos))
                        .collect();
                    edge.push(v);
                    edge.push(u);
                    edge.sort_unstable();
                    decoded[w].insert(edge);
                }
            }
        }
    }

    // local scan of owned triple classes
    let mut per_vertex: Vec<BTreeSet<Triangle>> = vec![BTreeSet::new(); n];
    for w in (0..n).map(VertexId) {
        let known = &decoded[w.idx()];
        let mut pair_edges: BTreeMap<(VertexId, VertexId), Vec<&Vec<VertexId>>> = BTreeMap::new();
        for edge in known {
            for i in 0..edge.len() {
                for j in i + 1..edge.len() {
                    pair_edges.entry((edge[i], edge[j])).or_default().push(edge);
                }
            }
        }
        let out = &mut per_vertex[w.idx()];
        for j in part.owned_indices(w) {
            let (d0, d1, d2) = part.digits(j);
            for x in part.block_range(d0) {
                for y in part.block_range(d1) {
                    if y <= x {
                        continue;
                    }
                    let Some(exy) = pair_edges.get(&(VertexId(x), VertexId(y))) else {
                        continue;
                    };
                    for z in part.block_range(d2) {
                        if z <= y {
                            continue;
                        }
                        let (Some(eyz), Some(ezx)) = (
                            pair_edges.get(&(VertexId(y), VertexId(z))),
                            pair_edges.get(&(VertexId(x), VertexId(z))),
                        ) else {
                            continue;
                        };
                        for &e0 in exy {
                            for &e1 in eyz {
                                for &e2 in ezx {
                                    if !class_ok(class, x, y, z, e0, e1, e2) {
                                        continue;
                                    }
                                    let t = Triangle::new(
                                        [VertexId(x), VertexId(y), VertexId(z)],
                                        [
                                            set_to_index[e0.as_slice()],
                                            set_to_index[e1.as_slice()],
                                            set_to_index[e2.as_slice()],
                                        ],
                                    )
                                    .expect("x < y < z");
                                    out.insert(t);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(CliqueRun {
        class,
        per_vertex,
        metrics,
        demands_per_vertex,
        route_rounds,
        logs,
    })
}

/// Position of `w` in the ascending enumeration of `[0, n) \ {v, u}`.
fn reduced_position(n: usize, v: VertexId, u: VertexId, w: VertexId) -> usize {
    debug_assert!(w != v && w != u && w.idx() < n);
    let mut pos = w.idx();
    if v < w {
        pos -= 1;
    }
    if u < w {
        pos -= 1;
    }
    pos
}

/// Inverse of [`reduced_position`].
fn reduced_unposition(n: usize, v: VertexId, u: VertexId, pos: usize) -> VertexId {
    let (lo, hi) = if v < u { (v, u) } else { (u, v) };
    let mut w = pos;
    if w >= lo.idx() {
        w += 1;
    }
    if w >= hi.idx() {
        w += 1;
    }
    debug_assert!(w < n);
    VertexId(w)
}

fn class_ok(
    class: TriangleClass,
    x: usize,
    y: usize,
    z: usize,
    e0: &[VertexId],
    e1: &[VertexId],
    e2: &[VertexId],
) -> bool {
    match class {
        TriangleClass::General => true,
        TriangleClass::Simple => e0 != e1 && e1 != e2 && e0 != e2,
        TriangleClass::Induced => {
            e0 != e1
                && e1 != e2
                && e0 != e2
                // walk (x, e0, y, e1, z, e2): v_i not in e_{i+1}
                && !e1.contains(&VertexId(x))
                && !e2.contains(&VertexId(y))
                && !e0.contains(&VertexId(z))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypersim_core::combin::nth_root_ceil;
    use hypersim_oracle::enumerate_bruteforce;

    fn check(h: &Hypergraph, class: TriangleClass) -> CliqueRun {
        let run = clique_enumerate(h, class, Bandwidth::default_for(h.n()), false).unwrap();
        let oracle = enumerate_bruteforce(h, class);
        let union: BTreeSet<Triangle> = run.per_vertex.iter().flatten().copied().collect();
        let total: usize = run.per_vertex.iter().map(BTreeSet::len).sum();
        assert_eq!(union.len(), total, "outputs overlap");
        assert_eq!(union, oracle.triangles, "union mismatch");
        run
    }

    #[test]
    fn single_graph_triangle() {
        let h = Hypergraph::build(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let run = check(&h, TriangleClass::Simple);
        let owners: Vec<usize> = run
            .per_vertex
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(v, _)| v)
            .collect();
        assert_eq!(owners.len(), 1, "exactly one vertex outputs the triangle");
    }

    #[test]
    fn random_graph_instance_matches_oracle() {
        let h = hypersim_core::sample_uniform_random(27, 2, 0.5, 9).unwrap();
        check(&h, TriangleClass::Simple);
    }

    #[test]
    fn rank_three_and_induced() {
        for seed in 0..4u64 {
            let h = hypersim_core::sample_uniform_random(9, 3, 0.5, seed).unwrap();
            check(&h, TriangleClass::Simple);
            check(&h, TriangleClass::Induced);
        }
    }

    #[test]
    fn non_uniform_passes() {
        let h = Hypergraph::build(
            7,
            vec![vec![0, 1], vec![1, 2], vec![0, 2, 3], vec![2, 3, 4, 5], vec![0, 4, 6]],
        )
        .unwrap();
        check(&h, TriangleClass::Simple);
        check(&h, TriangleClass::General);
    }

    #[test]
    fn edgeless_has_no_output() {
        let h = Hypergraph::build(5, vec![]).unwrap();
        let run = clique_enumerate(&h, TriangleClass::Simple, Bandwidth::default_for(5), false)
            .unwrap();
        assert!(run.per_vertex.iter().all(BTreeSet::is_empty));
        assert_eq!(run.metrics.messages_sent, 0);
    }

    #[test]
    fn message_count_bound_holds() {
        let h = hypersim_core::sample_uniform_random(27, 2, 0.5, 1).unwrap();
        let run = check(&h, TriangleClass::Simple);
        let s = nth_root_ceil(27, 3);
        let bound = 6 * (27 - 1) * s;
        for (v, &count) in run.demands_per_vertex.iter().enumerate() {
            assert!(count <= bound, "vertex {v}: {count} > {bound}");
        }
        for (rounds, guarantee) in run.route_rounds {
            assert!(rounds <= guarantee, "{rounds} > {guarantee}");
        }
    }

    #[test]
    fn duplicate_edge_sets_rejected() {
        let h = Hypergraph::build(4, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert!(clique_enumerate(&h, TriangleClass::Simple, Bandwidth::default_for(4), false)
            .is_err());
    }
}
