//! Exact trace computations on the induced multigraph's adjacency matrix.
//!
//! Entries are pair degrees, which grow combinatorially, so all arithmetic
//! uses big integers.

use num::BigUint;
use thiserror::Error;

use hypersim_core::{Hypergraph, PairMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    /// tr(A³) of a loop-free symmetric matrix is always divisible by 6; a
    /// remainder means the matrix construction is broken.
    #[error("tr(A^3) = {trace} is not divisible by 6")]
    NotDivisible { trace: BigUint },
}

/// tr(A²) = Σ_{u,v} A[u][v]².
pub fn trace_squared(mat: &PairMatrix) -> BigUint {
    let n = mat.n();
    let mut acc = BigUint::from(0u32);
    for u in 0..n {
        for v in 0..n {
            let a = BigUint::from(mat.get(u, v));
            acc += &a * &a;
        }
    }
    acc
}

/// tr(A³) = Σ_{u,v,w} A[u][v]·A[v][w]·A[w][u].
pub fn trace_cubed(mat: &PairMatrix) -> BigUint {
    let n = mat.n();
    let mut acc = BigUint::from(0u32);
    for u in 0..n {
        for v in 0..n {
            let auv = mat.get(u, v);
            if auv == 0 {
                continue;
            }
            for w in 0..n {
                let product = mat.get(v, w) * mat.get(w, u);
                if product != 0 {
                    acc += BigUint::from(auv) * BigUint::from(product);
                }
            }
        }
    }
    acc
}

/// Triangle count through the trace identity tr(A³) = 6t on the induced
/// multigraph. This counts triangles with three distinct vertices and free
/// edge choices, i.e. the general class.
pub fn count_via_trace(h: &Hypergraph) -> Result<BigUint, TraceError> {
    let mat = h.induced_multigraph();
    let t3 = trace_cubed(&mat);
    let six = BigUint::from(6u32);
    if &t3 % &six != BigUint::from(0u32) {
        return Err(TraceError::NotDivisible { trace: t3 });
    }
    Ok(t3 / six)
}
