//! The static hypergraph: vertex count, edge list, and the per-vertex
//! incidence lists that double as the port numbering.

use std::collections::BTreeSet;

use crate::error::CoreError;
use crate::generate::GenMeta;
use crate::ids::{EdgeId, VertexId};

/// An immutable hypergraph on vertices `0..n`.
///
/// Edges are stored as sorted vertex lists in construction order; the edge
/// list is a multiset (two edges with identical vertex sets stay distinct,
/// which is what restriction produces). Each vertex's incidence list follows
/// edge-list order and defines that vertex's port numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<VertexId>>,
    incidence: Vec<Vec<usize>>,
    rank: usize,
    meta: Option<GenMeta>,
}

impl Hypergraph {
    /// Builds a hypergraph from raw edge lists. Each edge must hold at least
    /// two distinct vertices inside `[0, n)`; vertex order within an edge is
    /// irrelevant and normalized to ascending.
    pub fn build(n: usize, edges: Vec<Vec<usize>>) -> Result<Self, CoreError> {
        let mut normalized: Vec<Vec<VertexId>> = Vec::with_capacity(edges.len());
        for (idx, edge) in edges.into_iter().enumerate() {
            if edge.len() < 2 {
                return Err(CoreError::EdgeTooSmall {
                    edge: idx,
                    len: edge.len(),
                });
            }
            let mut sorted = edge;
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(CoreError::DuplicateVertex {
                        edge: idx,
                        vertex: w[0],
                    });
                }
            }
            if let Some(&v) = sorted.last() {
                if v >= n {
                    return Err(CoreError::VertexOutOfRange {
                        edge: idx,
                        vertex: v,
                        n,
                    });
                }
            }
            normalized.push(sorted.into_iter().map(VertexId).collect());
        }
        let mut incidence = vec![Vec::new(); n];
        for (idx, edge) in normalized.iter().enumerate() {
            for &v in edge {
                incidence[v.idx()].push(idx);
            }
        }
        let rank = normalized.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Hypergraph {
            n,
            edges: normalized,
            incidence,
            rank,
            meta: None,
        })
    }

    pub fn with_meta(mut self, meta: GenMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&GenMeta> {
        self.meta.as_ref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Maximum edge cardinality (0 for an edgeless hypergraph).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.len() == self.rank)
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn edge_contains(&self, e: usize, v: VertexId) -> bool {
        self.edges[e].binary_search(&v).is_ok()
    }

    /// Port-numbered incident edge indices of `v`.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.incidence[v.idx()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.idx()].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(VertexId(v))).max().unwrap_or(0)
    }

    /// Number of edges containing both `u` and `v`.
    pub fn pair_degree(&self, u: VertexId, v: VertexId) -> Result<usize, CoreError> {
        if u == v {
            return Err(CoreError::PairOfEqualVertices(u.idx()));
        }
        if u.idx() >= self.n {
            return Err(CoreError::SubsetOutOfRange {
                vertex: u.idx(),
                n: self.n,
            });
        }
        if v.idx() >= self.n {
            return Err(CoreError::SubsetOutOfRange {
                vertex: v.idx(),
                n: self.n,
            });
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        Ok(self
            .incident(a)
            .iter()
            .filter(|&&e| self.edge_contains(e, b))
            .count())
    }

    /// Maximum pair degree over all vertex pairs.
    pub fn max_pair_degree(&self) -> usize {
        let mat = self.induced_multigraph();
        mat.max_entry() as usize
    }

    /// Sum of `|e| - 1` over edges incident to `v`.
    pub fn rank_degree(&self, v: VertexId) -> usize {
        self.incident(v).iter().map(|&e| self.edges[e].len() - 1).sum()
    }

    /// All vertices sharing at least one edge with `v` (excluding `v`).
    pub fn neighborhood(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &e in self.incident(v) {
            for &w in &self.edges[e] {
                if w != v {
                    out.insert(w);
                }
            }
        }
        out
    }

    /// Primal-graph adjacency: for each vertex, the sorted set of neighbors.
    pub fn primal_adjacency(&self) -> Vec<BTreeSet<VertexId>> {
        (0..self.n).map(|v| self.neighborhood(VertexId(v))).collect()
    }

    /// Number of edges in the primal graph.
    pub fn primal_edge_count(&self) -> usize {
        self.primal_adjacency()
            .iter()
            .map(|adj| adj.len())
            .sum::<usize>()
            / 2
    }

    /// Pair-multiplicity matrix of the induced multigraph: entry `(u, v)` is
    /// the number of edges containing both, zero on the diagonal.
    pub fn induced_multigraph(&self) -> PairMatrix {
        let mut mat = PairMatrix::zero(self.n);
        for edge in &self.edges {
            for i in 0..edge.len() {
                for j in i + 1..edge.len() {
                    mat.bump(edge[i].idx(), edge[j].idx());
                }
            }
        }
        mat
    }

    /// Restriction to a vertex subset: keeps every projected edge of
    /// cardinality at least 2 as a multiset in original edge order. The
    /// vertex universe `[0, n)` is preserved; vertices outside `u` become
    /// isolated.
    pub fn restrict(&self, u: &BTreeSet<VertexId>) -> Result<Hypergraph, CoreError> {
        if u.is_empty() {
            return Err(CoreError::EmptySubset);
        }
        if let Some(&v) = u.iter().next_back() {
            if v.idx() >= self.n {
                return Err(CoreError::SubsetOutOfRange {
                    vertex: v.idx(),
                    n: self.n,
                });
            }
        }
        let mut projected = Vec::new();
        for edge in &self.edges {
            let inter: Vec<usize> = edge
                .iter()
                .filter(|v| u.contains(v))
                .map(|v| v.idx())
                .collect();
            if inter.len() >= 2 {
                projected.push(inter);
            }
        }
        Hypergraph::build(self.n, projected)
    }

    /// Assigns each edge its `(owner, port)` ID: the owner is the minimal
    /// vertex of the edge and the port is the owner's incidence position.
    pub fn assign_edge_ids(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .map(|(idx, edge)| {
                let owner = edge[0];
                let port = self
                    .incident(owner)
                    .iter()
                    .position(|&e| e == idx)
                    .expect("incidence lists cover every edge");
                EdgeId { owner, port }
            })
            .collect()
    }
}

/// Dense symmetric matrix of pair multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMatrix {
    n: usize,
    counts: Vec<u64>,
}

impl PairMatrix {
    fn zero(n: usize) -> Self {
        PairMatrix {
            n,
            counts: vec![0; n * n],
        }
    }

    fn bump(&mut self, u: usize, v: usize) {
        self.counts[u * self.n + v] += 1;
        self.counts[v * self.n + u] += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.counts[u * self.n + v]
    }

    pub fn max_entry(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Total multiplicity over unordered pairs, i.e. the induced multigraph's
    /// edge count.
    pub fn total_multiplicity(&self) -> u64 {
        self.counts.iter().sum::<u64>() / 2
    }
}
