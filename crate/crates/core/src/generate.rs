//! Seeded hypergraph generators.
//!
//! Both generators drive a ChaCha12 stream cipher from the given seed, so a
//! parameter tuple always reproduces the same hypergraph, bit for bit.
//! Independent streams can be split off with `set_stream` when instances are
//! generated concurrently.

use std::fmt;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::combin::{nth_root_ceil, Combinations};
use crate::error::CoreError;
use crate::hypergraph::Hypergraph;

/// Generator parameters recorded on a sampled hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub enum GenMeta {
    Uniform { n: usize, r: usize, p: f64, seed: u64 },
    Sparse { n: usize, eps: f64, r: usize, core: usize, seed: u64 },
}

impl fmt::Display for GenMeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenMeta::Uniform { n, r, p, seed } => {
                write!(f, "uniform n={n} r={r} p={p} seed={seed}")
            }
            GenMeta::Sparse { n, eps, r, core, seed } => {
                write!(f, "sparse n={n} eps={eps} r={r} core={core} seed={seed}")
            }
        }
    }
}

/// One Bernoulli draw with exact behaviour at the endpoints: `p <= 0` never
/// fires and `p >= 1` always fires without consuming randomness, so those
/// cases are seed-independent.
fn coin(rng: &mut ChaCha12Rng, p: f64) -> bool {
    if p <= 0.0 {
        return false;
    }
    if p >= 1.0 {
        return true;
    }
    let threshold = (p * (u64::MAX as f64 + 1.0)) as u128;
    (rng.next_u64() as u128) < threshold
}

/// Samples H(n, r, p): every r-subset of `[0, n)` is an edge independently
/// with probability `p`. Subsets are visited in lexicographic order, so the
/// draw sequence is fixed by `(n, r, p, seed)`.
pub fn sample_uniform_random(
    n: usize,
    r: usize,
    p: f64,
    seed: u64,
) -> Result<Hypergraph, CoreError> {
    if r < 2 || r > n {
        return Err(CoreError::BadGeneratorParams(format!(
            "need 2 <= r <= n, got r={r}, n={n}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::BadGeneratorParams(format!(
            "probability p={p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for subset in Combinations::new(n, r) {
        if coin(&mut rng, p) {
            edges.push(subset);
        }
    }
    let h = Hypergraph::build(n, edges)?;
    Ok(h.with_meta(GenMeta::Uniform { n, r, p, seed }))
}

/// Sparse planted construction: a random r-uniform core H(n', r, 1/2) on the
/// first `n' = ceil(n^(1/r))` vertices with `r = ceil(2/eps)`, a rank-2 star
/// attaching each core vertex to vertex `n'`, and one tail edge
/// `{n', ..., n-1}`. The result is connected with total edge size O(r n).
pub fn sample_sparse_planted(n: usize, eps: f64, seed: u64) -> Result<Hypergraph, CoreError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoreError::BadGeneratorParams(format!(
            "need 0 < eps < 1, got {eps}"
        )));
    }
    let r = (2.0 / eps).ceil() as usize;
    let core = nth_root_ceil(n, r as u32);
    if core < r {
        return Err(CoreError::BadGeneratorParams(format!(
            "n={n} too small: core size {core} below rank {r}"
        )));
    }
    if n < core + 2 {
        return Err(CoreError::BadGeneratorParams(format!(
            "n={n} too small for a tail edge beyond core size {core}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for subset in Combinations::new(core, r) {
        if coin(&mut rng, 0.5) {
            edges.push(subset);
        }
    }
    for v in 0..core {
        edges.push(vec![v, core]);
    }
    edges.push((core..n).collect());
    let h = Hypergraph::build(n, edges)?;
    Ok(h.with_meta(GenMeta::Sparse { n, eps, r, core, seed }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::binomial_u128;
    use crate::ids::VertexId;

    #[test]
    fn p_zero_and_one_are_seed_independent() {
        for seed in [0u64, 1, 99] {
            assert_eq!(sample_uniform_random(6, 3, 0.0, seed).unwrap().m(), 0);
            assert_eq!(sample_uniform_random(6, 2, 1.0, seed).unwrap().m(), 15);
        }
    }

    #[test]
    fn same_seed_reproduces() {
        let a = sample_uniform_random(8, 3, 0.5, 42).unwrap();
        let b = sample_uniform_random(8, 3, 0.5, 42).unwrap();
        assert_eq!(a.edges(), b.edges());
        let c = sample_uniform_random(8, 3, 0.5, 43).unwrap();
        assert!(a.edges() != c.edges() || a.m() == c.m());
    }

    #[test]
    fn edge_count_within_range_and_near_mean() {
        let total = binomial_u128(8, 3).unwrap() as usize; // 56
        let mut sum = 0usize;
        for seed in 0..1000u64 {
            let h = sample_uniform_random(8, 3, 0.5, seed).unwrap();
            assert!(h.m() <= total);
            sum += h.m();
        }
        let mean = sum as f64 / 1000.0;
        // Binomial(56, 1/2): mean 28, sigma of the sample mean ~ 0.118
        assert!((mean - 28.0).abs() < 3.0 * 0.119, "mean = {mean}");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(sample_uniform_random(4, 1, 0.5, 0).is_err());
        assert!(sample_uniform_random(4, 5, 0.5, 0).is_err());
        assert!(sample_uniform_random(4, 2, 1.5, 0).is_err());
        assert!(sample_sparse_planted(10, 0.0, 0).is_err());
    }

    #[test]
    fn sparse_planted_shape() {
        // eps = 0.5 -> r = 4; n = 256 -> core = ceil(256^(1/4)) = 4
        let h = sample_sparse_planted(256, 0.5, 2).unwrap();
        match h.meta().unwrap() {
            GenMeta::Sparse { r, core, .. } => {
                assert_eq!(*r, 4);
                assert_eq!(*core, 4);
            }
            other => panic!("unexpected meta {other:?}"),
        }
        let total: usize = h.edges().iter().map(Vec::len).sum();
        let bound = 4 * 4usize.pow(4) + 4 + 256;
        assert!(total <= bound, "total edge size {total} > {bound}");
    }

    #[test]
    fn sparse_planted_connected() {
        for seed in 0..5u64 {
            let h = sample_sparse_planted(100, 0.5, seed).unwrap();
            // BFS over the primal graph
            let n = h.n();
            let adj = h.primal_adjacency();
            let mut seen = vec![false; n];
            let mut queue = std::collections::VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w.idx()] {
                        seen[w.idx()] = true;
                        queue.push_back(w.idx());
                    }
                }
            }
            assert!(seen.iter().all(|&s| s), "seed {seed} disconnected");
        }
    }

    #[test]
    fn pair_degree_matches_bruteforce_recount(){
        let h = sample_uniform_random(8, 3, 0.5, 42).unwrap();
        for u in 0..8 {
            for v in (u + 1)..8 {
                let direct = h.pair_degree(VertexId(u), VertexId(v)).unwrap();
                let recount = h
                    .edges()
                    .iter()
                    .filter(|e| e.contains(&VertexId(u)) && e.contains(&VertexId(v)))
                    .count();
                assert_eq!(direct, recount);
            }
        }
    }
}
