//! Brute-force triangle enumeration by scanning vertex triples.

use std::collections::{BTreeMap, BTreeSet};

use hypersim_core::{classify_triangle, Hypergraph, Triangle, TriangleClass, VertexId};

/// A deduplicated set of canonical triangles together with the class filter
/// it was produced for. Every member satisfies the recorded class or a
/// stricter one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSet {
    pub class: TriangleClass,
    pub triangles: BTreeSet<Triangle>,
}

impl TriangleSet {
    pub fn empty(class: TriangleClass) -> Self {
        TriangleSet {
            class,
            triangles: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }
}

/// Enumerates all canonical triangles of (at least) the requested class.
///
/// Iterates unordered vertex triples `u < v < w`, then every choice of one
/// edge per pair. Cubic in `n` with edge-choice factors; intended for the
/// oracle scales used in tests.
pub fn enumerate_bruteforce(h: &Hypergraph, class: TriangleClass) -> TriangleSet {
    let mut pair_edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, edge) in h.edges().iter().enumerate() {
        for i in 0..edge.len() {
            for j in i + 1..edge.len() {
                pair_edges
                    .entry((edge[i].idx(), edge[j].idx()))
                    .or_default()
                    .push(idx);
            }
        }
    }
    let empty: Vec<usize> = Vec::new();
    let edges_of = |a: usize, b: usize| -> &Vec<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        pair_edges.get(&key).unwrap_or(&empty)
    };

    let mut out = TriangleSet::empty(class);
    for u in 0..h.n() {
        for v in (u + 1)..h.n() {
            let euv = edges_of(u, v);
            if euv.is_empty() {
                continue;
            }
            for w in (v + 1)..h.n() {
                let evw = edges_of(v, w);
                if evw.is_empty() {
                    continue;
                }
                let ewu = edges_of(w, u);
                if ewu.is_empty() {
                    continue;
                }
                for &e0 in euv {
                    for &e1 in evw {
                        for &e2 in ewu {
                            let t = Triangle::new(
                                [VertexId(u), VertexId(v), VertexId(w)],
                                [e0, e1, e2],
                            )
                            .expect("u < v < w are distinct");
                            let c = classify_triangle(h, &t)
                                .expect("edges were chosen to satisfy incidence");
                            if c.satisfies(class) {
                                out.triangles.insert(t);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// True when the triangle has at least one vertex of degree at most `delta`.
pub fn is_delta_light(h: &Hypergraph, t: &Triangle, delta: usize) -> bool {
    t.vertices.iter().any(|&v| h.degree(v) <= delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::build(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn edgeless_is_empty() {
        let g = h(5, &[]);
        assert!(enumerate_bruteforce(&g, TriangleClass::General).is_empty());
    }

    #[test]
    fn single_edge_has_one_general_no_simple() {
        let g = h(3, &[&[0, 1, 2]]);
        assert_eq!(enumerate_bruteforce(&g, TriangleClass::General).len(), 1);
        assert_eq!(enumerate_bruteforce(&g, TriangleClass::Simple).len(), 0);
    }

    #[test]
    fn graph_triangle_counts() {
        let g = h(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        for class in [
            TriangleClass::General,
            TriangleClass::Simple,
            TriangleClass::Induced,
        ] {
            assert_eq!(enumerate_bruteforce(&g, class).len(), 1, "{class}");
        }
    }

    #[test]
    fn class_nesting() {
        let g = hypersim_core::sample_uniform_random(9, 3, 0.4, 7).unwrap();
        let gen = enumerate_bruteforce(&g, TriangleClass::General);
        let simple = enumerate_bruteforce(&g, TriangleClass::Simple);
        let induced = enumerate_bruteforce(&g, TriangleClass::Induced);
        assert!(simple.triangles.is_subset(&gen.triangles));
        assert!(induced.triangles.is_subset(&simple.triangles));
    }

    #[test]
    fn delta_light_filter() {
        let g = h(4, &[&[0, 1], &[1, 2], &[0, 2], &[0, 3], &[1, 3], &[2, 3]]);
        let t = enumerate_bruteforce(&g, TriangleClass::Simple)
            .triangles
            .into_iter()
            .next()
            .unwrap();
        assert!(is_delta_light(&g, &t, 3));
        assert!(!is_delta_light(&g, &t, 2));
    }
}
