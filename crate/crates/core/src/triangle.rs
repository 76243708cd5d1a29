//! Canonical triangles and their classification.
//!
//! A triangle is a closed walk `v0 e0 v1 e1 v2 e2` with three pairwise
//! distinct vertices and `v_i, v_{i+1} ∈ e_i` (indices mod 3). Edges may
//! repeat; how they repeat determines the class.

use std::fmt;

use crate::error::CoreError;
use crate::hypergraph::Hypergraph;
use crate::ids::VertexId;

/// Classification of a triangle.
///
/// `Induced ⇒ Simple ⇒ General`. Simple means the three edges are pairwise
/// distinct; induced additionally requires each vertex to avoid the one edge
/// it is not required to lie on (`v_i ∉ e_{i+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TriangleClass {
    General,
    Simple,
    Induced,
}

impl TriangleClass {
    /// True when `self` is at least as strict as `other`.
    pub fn satisfies(self, other: TriangleClass) -> bool {
        self >= other
    }
}

impl fmt::Display for TriangleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TriangleClass::General => "general",
            TriangleClass::Simple => "simple",
            TriangleClass::Induced => "induced",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for TriangleClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "general" => Ok(TriangleClass::General),
            "simple" => Ok(TriangleClass::Simple),
            "induced" => Ok(TriangleClass::Induced),
            other => Err(format!("unknown triangle class '{other}'")),
        }
    }
}

/// A triangle in canonical form: `v0` is the minimal vertex, of the two
/// orientations starting at `v0` the one with the smaller second vertex is
/// kept, and remaining ties break on the edge-index triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub vertices: [VertexId; 3],
    pub edges: [usize; 3],
}

impl Triangle {
    /// Canonicalizes an arbitrary orientation of a triangle. Errors when the
    /// vertices are not pairwise distinct.
    pub fn new(vertices: [VertexId; 3], edges: [usize; 3]) -> Result<Self, CoreError> {
        if vertices[0] == vertices[1] || vertices[1] == vertices[2] || vertices[0] == vertices[2] {
            return Err(CoreError::RepeatedTriangleVertex);
        }
        let mut best: Option<([VertexId; 3], [usize; 3])> = None;
        for rot in 0..3 {
            for &flip in &[false, true] {
                let cand = orient(vertices, edges, rot, flip);
                let better = match &best {
                    None => true,
                    Some(cur) => (cand.0, cand.1) < (cur.0, cur.1),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (v, e) = best.unwrap();
        Ok(Triangle {
            vertices: v,
            edges: e,
        })
    }
}

fn orient(v: [VertexId; 3], e: [usize; 3], rot: usize, flip: bool) -> ([VertexId; 3], [usize; 3]) {
    // rotation k maps (v0,e0,v1,e1,v2,e2) to (vk,ek,...)
    let rv = [v[rot % 3], v[(rot + 1) % 3], v[(rot + 2) % 3]];
    let re = [e[rot % 3], e[(rot + 1) % 3], e[(rot + 2) % 3]];
    if !flip {
        (rv, re)
    } else {
        // reversal keeps the head vertex and traverses the walk backwards
        ([rv[0], rv[2], rv[1]], [re[2], re[1], re[0]])
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} | {} {} {}",
            self.vertices[0],
            self.vertices[1],
            self.vertices[2],
            self.edges[0],
            self.edges[1],
            self.edges[2]
        )
    }
}

/// Classifies a triangle against a hypergraph, checking its incidence
/// constraints first.
///
/// Edge distinctness is by edge index; in a hypergraph whose edge list is a
/// multiset, two equal vertex sets at different indices count as distinct
/// edges.
pub fn classify_triangle(h: &Hypergraph, t: &Triangle) -> Result<TriangleClass, CoreError> {
    for i in 0..3 {
        let e = t.edges[i];
        if e >= h.m() {
            return Err(CoreError::EdgeIndexOutOfRange { edge: e, m: h.m() });
        }
        // v_i, v_{i+1} ∈ e_i
        for &v in &[t.vertices[i], t.vertices[(i + 1) % 3]] {
            if !h.edge_contains(e, v) {
                return Err(CoreError::IncidenceViolation {
                    vertex: v.idx(),
                    edge: e,
                });
            }
        }
    }
    let [e0, e1, e2] = t.edges;
    if e0 == e1 || e1 == e2 || e0 == e2 {
        return Ok(TriangleClass::General);
    }
    let induced = (0..3).all(|i| !h.edge_contains(t.edges[(i + 1) % 3], t.vertices[i]));
    Ok(if induced {
        TriangleClass::Induced
    } else {
        TriangleClass::Simple
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::build(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    fn tri(v: [usize; 3], e: [usize; 3]) -> Triangle {
        Triangle::new([VertexId(v[0]), VertexId(v[1]), VertexId(v[2])], e).unwrap()
    }

    #[test]
    fn canonical_form_is_orientation_invariant() {
        let base = tri([3, 1, 2], [7, 5, 6]);
        for rot in 0..3 {
            for &flip in &[false, true] {
                let (v, e) = orient(base.vertices, base.edges, rot, flip);
                assert_eq!(Triangle::new(v, e).unwrap(), base);
            }
        }
        assert_eq!(base.vertices[0], VertexId(1));
        assert!(base.vertices[1] < base.vertices[2]);
    }

    #[test]
    fn rejects_repeated_vertices() {
        assert!(Triangle::new([VertexId(0), VertexId(0), VertexId(1)], [0, 1, 2]).is_err());
    }

    // The three running examples on a rank-4 hypergraph, shifted to 0-based
    // vertices: one triangle per class.
    #[test]
    fn classify_general() {
        let g = h(4, &[&[0, 1, 2, 3]]);
        let t = tri([0, 1, 2], [0, 0, 0]);
        assert_eq!(classify_triangle(&g, &t), Ok(TriangleClass::General));
    }

    #[test]
    fn classify_simple_not_induced() {
        let g = h(8, &[&[0, 1, 2, 3], &[1, 2, 4, 5], &[0, 2, 6, 7]]);
        let t = tri([0, 1, 2], [0, 1, 2]);
        assert_eq!(classify_triangle(&g, &t), Ok(TriangleClass::Simple));
    }

    #[test]
    fn classify_induced() {
        let g = h(7, &[&[0, 1, 3, 4], &[1, 2, 3, 5], &[0, 2, 3, 6]]);
        let t = tri([0, 1, 2], [0, 1, 2]);
        assert_eq!(classify_triangle(&g, &t), Ok(TriangleClass::Induced));
    }

    #[test]
    fn classification_invariant_under_reorientation() {
        let g = h(8, &[&[0, 1, 2, 3], &[1, 2, 4, 5], &[0, 2, 6, 7]]);
        let vs = [VertexId(0), VertexId(1), VertexId(2)];
        let es = [0usize, 1, 2];
        let mut classes = std::collections::BTreeSet::new();
        for rot in 0..3 {
            for &flip in &[false, true] {
                let (v, e) = orient(vs, es, rot, flip);
                let t = Triangle::new(v, e).unwrap();
                classes.insert(classify_triangle(&g, &t).unwrap());
            }
        }
        assert_eq!(classes.len(), 1);
    }

    #[test]
    fn incidence_violation_detected() {
        let g = h(5, &[&[0, 1], &[1, 2], &[0, 2], &[3, 4]]);
        let t = Triangle {
            vertices: [VertexId(0), VertexId(1), VertexId(2)],
            edges: [0, 1, 3],
        };
        assert!(matches!(
            classify_triangle(&g, &t),
            Err(CoreError::IncidenceViolation { .. })
        ));
    }
}
