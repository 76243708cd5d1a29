//! Centralized reference peeling into layers: the greedy decomposition that
//! the distributed peel protocol reproduces.

use num::rational::Ratio;
use num::BigInt;

use crate::combin::ceil_log2;
use crate::density::Rational;
use crate::hypergraph::Hypergraph;
use crate::ids::VertexId;
use thiserror::Error;

/// A per-vertex layer assignment with 1-based layer indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub layer: Vec<usize>,
    pub depth: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayerError {
    /// Some vertices survived all iterations; this certifies that the
    /// maximum density exceeds `alpha / 2`.
    #[error("{unassigned:?} not peeled after {iterations} iterations; maximum density exceeds alpha/2")]
    Unconverged {
        unassigned: Vec<usize>,
        iterations: usize,
    },
}

/// Number of peeling iterations (and distributed peel rounds) used for a
/// hypergraph on `n` vertices.
pub fn peel_iterations(n: usize) -> usize {
    ceil_log2(n.max(2)) as usize
}

/// Greedy layered decomposition: layer `i` holds the vertices whose degree in
/// the restriction to not-yet-peeled vertices is at most `2 * alpha`. With
/// `alpha >= μ(H)` every vertex is assigned within `ceil(log2 n)` iterations;
/// otherwise the unassigned remainder is reported.
pub fn layered_decomposition_reference(
    h: &Hypergraph,
    alpha: &Rational,
) -> Result<LayerDecomposition, LayerError> {
    let n = h.n();
    let iterations = peel_iterations(n);
    let threshold = alpha * Ratio::from_integer(BigInt::from(2));
    let mut layer = vec![0usize; n];
    let mut alive = vec![true; n];
    let mut remaining = n;
    let mut depth = 0;
    for it in 1..=iterations {
        if remaining == 0 {
            break;
        }
        let peel: Vec<usize> = (0..n)
            .filter(|&v| alive[v])
            .filter(|&v| {
                let deg = surviving_degree(h, VertexId(v), &alive);
                Ratio::from_integer(BigInt::from(deg)) <= threshold
            })
            .collect();
        for &v in &peel {
            layer[v] = it;
            alive[v] = false;
        }
        remaining -= peel.len();
        if !peel.is_empty() {
            depth = it;
        }
    }
    if remaining > 0 {
        return Err(LayerError::Unconverged {
            unassigned: (0..n).filter(|&v| alive[v]).collect(),
            iterations,
        });
    }
    Ok(LayerDecomposition { layer, depth })
}

/// Degree of `v` in the restriction to `{v} ∪ alive`: the number of incident
/// edges that still contain another surviving vertex.
fn surviving_degree(h: &Hypergraph, v: VertexId, alive: &[bool]) -> usize {
    h.incident(v)
        .iter()
        .filter(|&&e| h.edge(e).iter().any(|&w| w != v && alive[w.idx()]))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::build(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    fn rat(a: i64, b: i64) -> Rational {
        Ratio::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn star_peels_leaves_first() {
        // K_{1,5}: center 0, five leaves
        let g = h(6, &[&[0, 1], &[0, 2], &[0, 3], &[0, 4], &[0, 5]]);
        let d = layered_decomposition_reference(&g, &rat(2, 1)).unwrap();
        for leaf in 1..6 {
            assert_eq!(d.layer[leaf], 1);
        }
        assert_eq!(d.layer[0], 2);
        assert_eq!(d.depth, 2);
    }

    #[test]
    fn low_degree_collapses_to_one_layer() {
        let g = h(4, &[&[0, 1], &[2, 3]]);
        let d = layered_decomposition_reference(&g, &rat(1, 1)).unwrap();
        assert!(d.layer.iter().all(|&l| l == 1));
        assert_eq!(d.depth, 1);
    }

    #[test]
    fn k4_with_tiny_alpha_fails() {
        let g = h(4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]]);
        let err = layered_decomposition_reference(&g, &rat(1, 1)).unwrap_err();
        match err {
            LayerError::Unconverged { unassigned, .. } => assert_eq!(unassigned.len(), 4),
        }
        // exact maximum density confirms mu > alpha / 2
        let mu = crate::density::max_density_exact(&g).unwrap();
        assert!(mu > rat(1, 2));
    }

    #[test]
    fn depth_bounded_when_alpha_is_mu() {
        let g = h(6, &[&[0, 1, 2], &[1, 2, 3], &[3, 4, 5], &[0, 3, 5]]);
        let mu = crate::density::max_density_exact(&g).unwrap();
        let d = layered_decomposition_reference(&g, &mu).unwrap();
        assert!(d.depth <= peel_iterations(6));
    }
}
