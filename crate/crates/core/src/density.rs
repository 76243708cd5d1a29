//! Subset density and exact maximum density.

use std::collections::BTreeSet;

use num::rational::Ratio;
use num::BigInt;

use crate::error::CoreError;
use crate::hypergraph::Hypergraph;
use crate::ids::VertexId;

pub type Rational = Ratio<BigInt>;

/// Default cap for the exponential exact maximum-density scan.
pub const DEFAULT_DENSITY_CAP: usize = 20;

/// Density of `u` relative to `h`: `(1/|u|) * Σ_{e ∈ E[u]} |e|`, where `E[u]`
/// keeps every projection of cardinality at least 2.
pub fn density(h: &Hypergraph, u: &BTreeSet<VertexId>) -> Result<Rational, CoreError> {
    if u.is_empty() {
        return Err(CoreError::EmptySubset);
    }
    if let Some(&v) = u.iter().next_back() {
        if v.idx() >= h.n() {
            return Err(CoreError::SubsetOutOfRange {
                vertex: v.idx(),
                n: h.n(),
            });
        }
    }
    let mut total: u64 = 0;
    for edge in h.edges() {
        let k = edge.iter().filter(|v| u.contains(v)).count() as u64;
        if k >= 2 {
            total += k;
        }
    }
    Ok(Ratio::new(BigInt::from(total), BigInt::from(u.len())))
}

/// Exact maximum density over all nonempty vertex subsets, by exhaustive
/// scan. Capped because the scan is exponential in `n`.
pub fn max_density_exact(h: &Hypergraph) -> Result<Rational, CoreError> {
    max_density_exact_capped(h, DEFAULT_DENSITY_CAP)
}

pub fn max_density_exact_capped(h: &Hypergraph, cap: usize) -> Result<Rational, CoreError> {
    let n = h.n();
    if n > cap {
        return Err(CoreError::DensityCapExceeded { n, cap });
    }
    if n == 0 {
        return Err(CoreError::EmptySubset);
    }
    let edge_masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, v| m | (1 << v.idx())))
        .collect();
    // best fraction tracked as (sum, size), compared by cross-multiplication
    let mut best: (u64, u64) = (0, 1);
    for subset in 1u32..(1u32 << n) {
        let size = subset.count_ones() as u64;
        let mut sum: u64 = 0;
        for &mask in &edge_masks {
            let k = (mask & subset).count_ones() as u64;
            if k >= 2 {
                sum += k;
            }
        }
        if (sum as u128) * (best.1 as u128) > (best.0 as u128) * (size as u128) {
            best = (sum, size);
        }
    }
    Ok(Ratio::new(BigInt::from(best.0), BigInt::from(best.1)))
}
