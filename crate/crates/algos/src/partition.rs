//! The triple partition behind the CLIQUE algorithm: split the vertex set
//! into `s = ceil(n^(1/3))` near-equal blocks and assign the triple class
//! `S_{d0} x S_{d1} x S_{d2}` to the index with base-s digits `(d0,d1,d2)`.
//! For non-cube `n` the digit indices in `[n, s^3)` are re-homed to `index
//! mod n`, which keeps the classes a partition of all of `V x V x V`.

use std::collections::BTreeSet;

use hypersim_core::combin::nth_root_ceil;
use hypersim_core::VertexId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePartition {
    n: usize,
    s: usize,
    /// block b covers [starts[b], starts[b+1])
    starts: Vec<usize>,
}

impl TriplePartition {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "partition needs at least one vertex");
        let s = nth_root_ceil(n, 3);
        let q = n / s;
        let rem = n % s;
        let mut starts = Vec::with_capacity(s + 1);
        let mut at = 0;
        for b in 0..s {
            starts.push(at);
            at += q + usize::from(b < rem);
        }
        starts.push(at);
        debug_assert_eq!(at, n);
        TriplePartition { n, s, starts }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.s
    }

    pub fn block_of(&self, v: VertexId) -> usize {
        debug_assert!(v.idx() < self.n);
        match self.starts.binary_search(&v.idx()) {
            Ok(b) => b.min(self.s - 1),
            Err(b) => b - 1,
        }
    }

    pub fn block_range(&self, b: usize) -> std::ops::Range<usize> {
        self.starts[b]..self.starts[b + 1]
    }

    pub fn digits(&self, index: usize) -> (usize, usize, usize) {
        let s = self.s;
        (index / (s * s), (index / s) % s, index % s)
    }

    pub fn index_of(&self, d0: usize, d1: usize, d2: usize) -> usize {
        let s = self.s;
        d0 * s * s + d1 * s + d2
    }

    /// Owner of a digit index, with out-of-range indices re-homed mod n.
    pub fn owner_of_index(&self, index: usize) -> VertexId {
        debug_assert!(index < self.s.pow(3));
        VertexId(if index < self.n { index } else { index % self.n })
    }

    /// All digit indices whose triple classes `v` owns.
    pub fn owned_indices(&self, v: VertexId) -> Vec<usize> {
        let mut out = vec![v.idx()];
        let cube = self.s.pow(3);
        let mut j = self.n + v.idx();
        while j < cube {
            out.push(j);
            j += self.n;
        }
        out
    }

    /// The vertex responsible for the ordered triple `(a, b, c)`.
    pub fn triple_owner(&self, a: VertexId, b: VertexId, c: VertexId) -> VertexId {
        self.owner_of_index(self.index_of(self.block_of(a), self.block_of(b), self.block_of(c)))
    }
}

/// The six digit arrangements `abx, axb, bax, bxa, xab, xba` over all
/// `x in [0, s)`, as raw digit indices in `[0, s^3)`.
pub fn destination_indices_raw(s: usize, a: usize, b: usize) -> BTreeSet<usize> {
    assert!(a < s && b < s);
    let idx = |d0: usize, d1: usize, d2: usize| d0 * s * s + d1 * s + d2;
    let mut out = BTreeSet::new();
    for x in 0..s {
        out.insert(idx(a, b, x));
        out.insert(idx(a, x, b));
        out.insert(idx(b, a, x));
        out.insert(idx(b, x, a));
        out.insert(idx(x, a, b));
        out.insert(idx(x, b, a));
    }
    out
}

/// The destination vertices for a pair of blocks, re-homed into `[0, n)`.
pub fn destination_set(part: &TriplePartition, a: usize, b: usize) -> BTreeSet<VertexId> {
    destination_indices_raw(part.block_count(), a, b)
        .into_iter()
        .map(|j| part.owner_of_index(j))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_case_blocks_and_digits() {
        let p = TriplePartition::new(27);
        assert_eq!(p.block_count(), 3);
        for b in 0..3 {
            assert_eq!(p.block_range(b).len(), 9);
        }
        assert_eq!(p.digits(0), (0, 0, 0));
        // 5 = 0*9 + 1*3 + 2
        assert_eq!(p.digits(5), (0, 1, 2));
        assert_eq!(p.index_of(0, 1, 2), 5);
    }

    #[test]
    fn destination_pattern_example() {
        // s = 3, a = 0, b = 1
        let raw = destination_indices_raw(3, 0, 1);
        let expected: BTreeSet<usize> = [
            3, 4, 5, // abx
            1, 4, 7, // axb
            9, 10, 11, // bax
            9, 12, 15, // bxa
            1, 10, 19, // xab
            3, 12, 21, // xba
        ]
        .into_iter()
        .collect();
        assert_eq!(raw, expected);
    }

    #[test]
    fn destinations_carry_the_blocks_in_their_digits() {
        for s in 1..=6usize {
            for a in 0..s {
                for b in 0..s {
                    for &j in &destination_indices_raw(s, a, b) {
                        let d = (j / (s * s), (j / s) % s, j % s);
                        let digits = [d.0, d.1, d.2];
                        assert!(digits.contains(&a) && digits.contains(&b));
                    }
                }
            }
        }
    }

    #[test]
    fn equal_blocks_collapse_patterns() {
        let p = TriplePartition::new(27);
        let raw = destination_indices_raw(p.block_count(), 2, 2);
        assert!(raw.len() <= 3 * p.block_count());
    }

    #[test]
    fn triples_partition_exhaustively() {
        let mut sizes = vec![1usize, 2, 3, 7, 8, 9, 26, 27, 28];
        sizes.extend([30, 63, 64, 65, 100, 125, 127, 199, 200]);
        for n in sizes {
            let p = TriplePartition::new(n);
            let cube = p.block_count().pow(3);
            // every digit index has exactly one owner inside [0, n)
            let mut owned = vec![0usize; n];
            for j in 0..cube {
                owned[p.owner_of_index(j).idx()] += 1;
            }
            let listed: usize = (0..n).map(|v| p.owned_indices(VertexId(v)).len()).sum();
            assert_eq!(listed, cube, "n={n}");
            for v in 0..n {
                assert_eq!(p.owned_indices(VertexId(v)).len(), owned[v], "n={n} v={v}");
            }
            // triples cover V^3 exactly once: every ordered triple maps to
            // one owned class, and class sizes add up to n^3
            let mut total = 0usize;
            for j in 0..cube {
                let (d0, d1, d2) = p.digits(j);
                total += p.block_range(d0).len() * p.block_range(d1).len() * p.block_range(d2).len();
            }
            assert_eq!(total, n * n * n, "n={n}");
        }
        // spot-check the triple -> owner map agrees with digit arithmetic
        let p = TriplePartition::new(27);
        assert_eq!(
            p.triple_owner(VertexId(0), VertexId(10), VertexId(20)),
            VertexId(p.index_of(0, 1, 2))
        );
    }

    #[test]
    fn block_of_is_consistent_with_ranges() {
        for n in [1usize, 5, 11, 27, 50, 200] {
            let p = TriplePartition::new(n);
            for b in 0..p.block_count() {
                for v in p.block_range(b) {
                    assert_eq!(p.block_of(VertexId(v)), b, "n={n} v={v}");
                }
            }
        }
    }
}
