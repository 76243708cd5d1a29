//! Small combinatorial helpers: exact binomials, subset enumeration in
//! lexicographic order, colexicographic (un)ranking, and integer roots.

use num::BigUint;

/// `ceil(log2(x))` with the convention that values `<= 1` map to `0`.
pub fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Bits needed to address one of `n` vertices (at least 1).
pub fn id_bits(n: usize) -> u64 {
    ceil_log2(n.max(2)) as u64
}

/// Bits of the minimal binary encoding of `x` (at least 1).
pub fn value_bits(x: u64) -> u64 {
    (64 - x.leading_zeros()).max(1) as u64
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient as `u128`, `None` on overflow.
pub fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Smallest integer `s` with `s.pow(r) >= n`, i.e. `ceil(n^(1/r))`.
pub fn nth_root_ceil(n: usize, r: u32) -> usize {
    if n <= 1 {
        return n;
    }
    let mut lo = 1usize;
    let mut hi = 2usize;
    while pow_at_least(hi, r, n).is_lt() {
        lo = hi;
        hi *= 2;
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if pow_at_least(mid, r, n).is_lt() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn pow_at_least(base: usize, r: u32, target: usize) -> std::cmp::Ordering {
    let mut acc: u128 = 1;
    for _ in 0..r {
        acc = acc.saturating_mul(base as u128);
        if acc >= target as u128 {
            return std::cmp::Ordering::Equal; // at or above target
        }
    }
    if acc >= target as u128 {
        std::cmp::Ordering::Equal
    } else {
        std::cmp::Ordering::Less
    }
}

/// Iterator over all `k`-subsets of `[0, n)` as sorted index vectors, in
/// lexicographic order.
pub struct Combinations {
    n: usize,
    k: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let cur = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, k, cur }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.as_mut()?;
        let out = cur.clone();
        if self.k == 0 {
            self.cur = None;
            return Some(out);
        }
        // advance to the lexicographic successor
        let mut i = self.k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if cur[i] + 1 <= self.n - (self.k - i) {
                cur[i] += 1;
                for j in i + 1..self.k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Colexicographic rank of a sorted `k`-subset `s` of a ground set indexed by
/// position: `rank = sum_i C(s[i], i+1)`.
pub fn colex_rank(subset: &[usize]) -> u128 {
    let mut rank: u128 = 0;
    for (i, &s) in subset.iter().enumerate() {
        rank += binomial_u128(s, i + 1).expect("colex rank overflow");
    }
    rank
}

/// Inverse of [`colex_rank`] for `k`-subsets of `[0, universe)`.
pub fn colex_unrank(mut rank: u128, k: usize, universe: usize) -> Vec<usize> {
    let mut out = vec![0usize; k];
    let mut hi = universe;
    for i in (0..k).rev() {
        // largest s with C(s, i+1) <= rank
        let mut s = i; // C(i, i+1) = 0
        for cand in (i..hi).rev() {
            let c = binomial_u128(cand, i + 1).expect("colex unrank overflow");
            if c <= rank {
                s = cand;
                rank -= c;
                break;
            }
        }
        out[i] = s;
        hi = s;
    }
    out
}
