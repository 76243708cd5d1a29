//! Exact verification of the edge/triangle inequalities on uniform
//! hypergraphs, and the closed-form expected-triangle bounds for the
//! H(n, r, 1/2) model.

use num::rational::Ratio;
use num::{BigInt, BigUint};
use thiserror::Error;

use hypersim_core::combin::binomial;
use hypersim_core::Hypergraph;

use crate::trace::{count_via_trace, trace_cubed, trace_squared, TraceError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("hypergraph is not uniform (rank {rank}); the theorem-form bound needs uniformity")]
    NotUniform { rank: usize },
    #[error("need n >= 3r for positive binomials, got n = {n}, r = {r}")]
    TooSmall { n: usize, r: usize },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// Raw quantities and pass flags for the three inequalities tying a uniform
/// hypergraph's triangle count to its edge count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub r: usize,
    pub m: usize,
    /// General-class triangle count (tr(A³)/6).
    pub t: BigUint,
    /// Maximum multiplicity of the induced multigraph.
    pub mu: BigUint,
    pub tr_a2: BigUint,
    pub tr_a3: BigUint,
    /// tr(A²) ≤ 2 μ m′ with m′ = m·C(r,2).
    pub ineq_trace: bool,
    /// (6t)² ≤ (2 μ m′)³.
    pub ineq_multigraph: bool,
    /// t ≤ (√2/3)·(m·C(n−3,r−2)·C(r,2))^{3/2}, squared to (3t)² ≤ 2X³.
    pub ineq_edge_bound: bool,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.ineq_trace && self.ineq_multigraph && self.ineq_edge_bound
    }

    pub const CSV_HEADER: &'static str = "n,r,m,t,mu,trA2,trA3,ineq1,ineq2,ineq3";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.r,
            self.m,
            self.t,
            self.mu,
            self.tr_a2,
            self.tr_a3,
            u8::from(self.ineq_trace),
            u8::from(self.ineq_multigraph),
            u8::from(self.ineq_edge_bound),
        )
    }
}

/// Checks the three inequalities in exact integer arithmetic. The input must
/// be r-uniform; an edgeless hypergraph passes trivially.
pub fn check_edge_bounds(h: &Hypergraph) -> Result<BoundReport, BoundsError> {
    if !h.is_uniform() {
        return Err(BoundsError::NotUniform { rank: h.rank() });
    }
    let n = h.n();
    let r = h.rank();
    let m = h.m();
    let mat = h.induced_multigraph();
    let mu = BigUint::from(mat.max_entry());
    let tr_a2 = trace_squared(&mat);
    let tr_a3 = trace_cubed(&mat);
    let t = count_via_trace(h)?;

    // m' = m * C(r, 2): the induced multigraph's edge count
    let m_prime = BigUint::from(m) * binomial(r, 2);
    let two_mu_mprime = BigUint::from(2u32) * &mu * &m_prime;

    let ineq_trace = tr_a2 <= two_mu_mprime;
    let six_t_sq = &tr_a3 * &tr_a3;
    let rhs_cubed = (&two_mu_mprime) * (&two_mu_mprime) * (&two_mu_mprime);
    let ineq_multigraph = six_t_sq <= rhs_cubed;

    // X = m * C(n-3, r-2) * C(r, 2); compare (3t)^2 <= 2 X^3
    let x = if r >= 2 && n >= 3 {
        BigUint::from(m) * binomial(n - 3, r - 2) * binomial(r, 2)
    } else {
        BigUint::from(0u32)
    };
    let three_t = BigUint::from(3u32) * &t;
    let lhs = &three_t * &three_t;
    let rhs = BigUint::from(2u32) * (&x) * (&x) * (&x);
    let ineq_edge_bound = lhs <= rhs;

    Ok(BoundReport {
        n,
        r,
        m,
        t,
        mu,
        tr_a2,
        tr_a3,
        ineq_trace,
        ineq_multigraph,
        ineq_edge_bound,
    })
}

/// Closed-form bounds on the expected number of triangles in H(n, r, 1/2):
///
/// * lower: (1/8)·C(n,3)·C(n−3,r−2)·C(n−r−1,r−2)·C(n−2r+1,r−2) — the
///   disjoint-edge triangle family, each present with probability 1/8;
/// * upper: C(n,3)·C(n−3,r−2)³ — every vertex triple with every choice of
///   one supporting edge per pair.
pub fn expected_triangle_bounds(
    n: usize,
    r: usize,
) -> Result<(Ratio<BigInt>, Ratio<BigInt>), BoundsError> {
    if r < 2 || n < 3 * r {
        return Err(BoundsError::TooSmall { n, r });
    }
    let c_n3 = binomial(n, 3);
    let a = binomial(n - 3, r - 2);
    let b = binomial(n - r - 1, r - 2);
    let c = binomial(n - 2 * r + 1, r - 2);
    let lower_num = BigInt::from(&c_n3 * &a * b * c);
    let lower = Ratio::new(lower_num, BigInt::from(8));
    let upper_num = BigInt::from(&c_n3 * (&a) * (&a) * (&a));
    let upper = Ratio::from_integer(upper_num);
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::build(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    fn graph_triangle() -> Hypergraph {
        h(3, &[&[0, 1], &[1, 2], &[0, 2]])
    }

    #[test]
    fn graph_triangle_report() {
        let rep = check_edge_bounds(&graph_triangle()).unwrap();
        assert_eq!(rep.m, 3);
        assert_eq!(rep.mu, BigUint::from(1u32));
        assert_eq!(rep.t, BigUint::from(1u32));
        // (6·1)² = 36 ≤ (2·1·3)³ = 216
        assert!(rep.ineq_multigraph);
        // t = 1 against (√2/3)·3^{3/2} ≈ 2.449: (3·1)² = 9 ≤ 2·27 = 54
        assert!(rep.ineq_edge_bound);
        assert!(rep.all_pass());
    }

    #[test]
    fn non_uniform_rejected() {
        let g = h(4, &[&[0, 1], &[0, 1, 2]]);
        assert!(matches!(
            check_edge_bounds(&g),
            Err(BoundsError::NotUniform { .. })
        ));
    }

    #[test]
    fn edgeless_passes_trivially() {
        let rep = check_edge_bounds(&h(4, &[])).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.t, BigUint::from(0u32));
    }

    #[test]
    fn random_sweep_all_pass() {
        for n in 6..=10usize {
            for seed in 0..10u64 {
                let g = hypersim_core::sample_uniform_random(n, 3, 0.5, seed).unwrap();
                let rep = check_edge_bounds(&g).unwrap();
                assert!(rep.all_pass(), "failed at n={n} seed={seed}: {rep:?}");
            }
        }
    }

    #[test]
    fn expected_bounds_r2_collapse() {
        // all the (r-2)-binomials are 1, so lower = C(n,3)/8, upper = C(n,3)
        let (lo, hi) = expected_triangle_bounds(10, 2).unwrap();
        assert_eq!(lo, Ratio::new(BigInt::from(120), BigInt::from(8)));
        assert_eq!(hi, Ratio::from_integer(BigInt::from(120)));
    }

    #[test]
    fn expected_bounds_n10_r3() {
        // lower = (1/8)·120·C(7,1)·C(6,1)·C(5,1) = 3150, upper = 120·7³ = 41160
        let (lo, hi) = expected_triangle_bounds(10, 3).unwrap();
        assert_eq!(lo, Ratio::from_integer(BigInt::from(3150)));
        assert_eq!(hi, Ratio::from_integer(BigInt::from(41160)));
    }

    #[test]
    fn expected_bounds_need_room() {
        assert!(expected_triangle_bounds(8, 3).is_err());
    }

    #[test]
    fn csv_row_shape() {
        let rep = check_edge_bounds(&graph_triangle()).unwrap();
        let row = rep.csv_row();
        assert_eq!(row.split(',').count(), BoundReport::CSV_HEADER.split(',').count());
        assert!(row.starts_with("3,2,3,1,1,"));
    }
}
