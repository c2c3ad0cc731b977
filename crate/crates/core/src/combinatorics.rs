//! Binomial coefficients and colexicographic ranking of k-subsets.
//!
//! Edges of a k-uniform hypergraph on `0..n` are stored densely, indexed by
//! their colex rank: the sorted set `c_0 < c_1 < ... < c_{k-1}` has rank
//! `sum_i C(c_i, i + 1)`. Colex order does not depend on `n`, so a k-set keeps
//! its index when the ground set grows.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

fn table() -> &'static [[u64; MAX_VERTICES + 1]; MAX_VERTICES + 1] {
    static TABLE: OnceLock<Box<[[u64; MAX_VERTICES + 1]; MAX_VERTICES + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; MAX_VERTICES + 1]; MAX_VERTICES + 1]);
        for n in 0..=MAX_VERTICES {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

/// `C(n, k)`, zero when `k > n`. Panics if `n > 64`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    table()[n][k]
}

/// `C(n, k)` as `f64`, valid for any `n` (exact whenever the value is below 2^53).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= MAX_VERTICES {
        return binomial(n, k) as f64;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A strictly increasing set of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSet(Vec<usize>);

impl KSet {
    /// Validates that `vertices` is strictly increasing with every entry below `n`.
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        if vertices.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::input(format!("k-set {vertices:?} is not strictly increasing")));
        }
        if let Some(&v) = vertices.last() {
            if v >= n {
                return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
            }
        }
        Ok(KSet(vertices))
    }

    /// Sorts and deduplicates-checks arbitrary input.
    pub fn from_unsorted(mut vertices: Vec<usize>, n: usize) -> Result<Self> {
        vertices.sort_unstable();
        Self::new(vertices, n)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }
}

/// Colex rank of a validated k-set.
pub fn rank_kset(s: &KSet) -> usize {
    rank_sorted(s.vertices())
}

/// Colex rank of a slice that the caller guarantees is strictly increasing.
#[inline]
pub fn rank_sorted(vertices: &[usize]) -> usize {
    vertices
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c, i + 1) as usize)
        .sum()
}

/// Colex rank of the set encoded by `mask` (bit `v` set iff `v` is a member).
#[inline]
pub fn rank_mask(mut mask: u64) -> usize {
    let mut rank = 0usize;
    let mut i = 1;
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        rank += binomial(v, i) as usize;
        i += 1;
        mask &= mask - 1;
    }
    rank
}

/// Inverse of [`rank_kset`]: the k-set of `0..n` with colex rank `rank`.
pub fn unrank_kset(rank: usize, n: usize, k: usize) -> Result<KSet> {
    let total = binomial(n, k) as usize;
    if rank >= total {
        return Err(Error::input(format!("rank {rank} out of range for C({n},{k}) = {total}")));
    }
    let mut out = vec![0usize; k];
    let mut r = rank as u64;
    let mut upper = n;
    for i in (0..k).rev() {
        // largest c < upper with C(c, i + 1) <= r
        let mut c = upper - 1;
        while binomial(c, i + 1) > r {
            c -= 1;
        }
        out[i] = c;
        r -= binomial(c, i + 1);
        upper = c;
    }
    Ok(KSet(out))
}

/// Iterator over the k-subsets of `0..n` in colex order.
#[derive(Clone, Debug)]
pub struct KSubsets {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        KSubsets { n, current: (0..k).collect(), done: k > n }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = 0;
        loop {
            if i == k {
                self.done = true;
                break;
            }
            let limit = if i + 1 < k { self.current[i + 1] } else { self.n };
            if self.current[i] + 1 < limit {
                self.current[i] += 1;
                for (j, slot) in self.current[..i].iter_mut().enumerate() {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Ordered tuples of `len` distinct vertices from `0..n`, in lexicographic order.
pub fn ordered_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    let mut used = vec![false; n];
    fn rec(n: usize, len: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, len, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    if len <= n {
        rec(n, len, &mut cur, &mut used, &mut out);
    }
    out
}

/// Number of ordered tuples of `len` distinct elements from `n`.
pub fn falling_factorial(n: usize, len: usize) -> f64 {
    if len > n {
        return 0.0;
    }
    (0..len).fold(1.0, |acc, i| acc * (n - i) as f64)
}

/// Calls `f` on every sequence of `i` disjoint pairs `(x_j, y_j)` with
/// `x_j < y_j` and `x_1 < x_2 < ... < x_i`, flattened as `[x_1, y_1, ...]`.
///
/// Each such sequence represents the `2^i * i!` ordered tuples obtained by
/// swapping within pairs and reordering pairs.
pub fn for_each_pair_matching(n: usize, i: usize, mut f: impl FnMut(&[usize])) {
    fn rec(n: usize, i: usize, used: &mut [bool], cur: &mut Vec<usize>, min_x: usize, f: &mut impl FnMut(&[usize])) {
        if cur.len() == 2 * i {
            f(cur);
            return;
        }
        for x in min_x..n {
            if used[x] {
                continue;
            }
            used[x] = true;
            for y in x + 1..n {
                if used[y] {
                    continue;
                }
                used[y] = true;
                cur.push(x);
                cur.push(y);
                rec(n, i, used, cur, x + 1, f);
                cur.pop();
                cur.pop();
                used[y] = false;
            }
            used[x] = false;
        }
    }
    if 2 * i > n {
        return;
    }
    let mut used = vec![false; n];
    let mut cur = Vec::with_capacity(2 * i);
    rec(n, i, &mut used, &mut cur, 0, &mut f);
}

/// Number of sequences visited by [`for_each_pair_matching`].
pub fn pair_matching_count(n: usize, i: usize) -> f64 {
    let fact: f64 = (1..=i).map(|j| j as f64).product();
    falling_factorial(n, 2 * i) / (2f64.powi(i as i32) * fact)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial_f64(70, 2), 2415.0);
    }

    #[test]
    fn rank_first_and_last() {
        assert_eq!(rank_kset(&KSet::new(vec![0, 1], 4).unwrap()), 0);
        assert_eq!(rank_kset(&KSet::new(vec![2, 3], 4).unwrap()), 5);
    }

    #[test]
    fn rank_unrank_roundtrip_exhaustive() {
        for (n, k) in [(8, 3), (6, 2), (5, 0), (5, 5), (10, 4)] {
            let total = binomial(n, k) as usize;
            let mut seen = 0;
            for (r, s) in KSubsets::new(n, k).enumerate() {
                let ks = KSet::new(s, n).unwrap();
                assert_eq!(rank_kset(&ks), r);
                assert_eq!(rank_mask(ks.mask()), r);
                assert_eq!(unrank_kset(r, n, k).unwrap(), ks);
                seen += 1;
            }
            assert_eq!(seen, total);
        }
    }

    #[test]
    fn invalid_ksets_rejected() {
        assert!(KSet::new(vec![1, 0], 4).is_err());
        assert!(KSet::new(vec![1, 1], 4).is_err());
        assert!(KSet::new(vec![0, 4], 4).is_err());
        assert!(unrank_kset(6, 4, 2).is_err());
    }

    #[test]
    fn pair_matchings_cover_tuples() {
        for (n, i) in [(6, 1), (6, 2), (7, 3), (8, 2)] {
            let mut count = 0;
            for_each_pair_matching(n, i, |t| {
                assert_eq!(t.len(), 2 * i);
                count += 1;
            });
            assert_eq!(count as f64, pair_matching_count(n, i));
            assert_eq!(ordered_tuples(n, 2 * i).len() as f64, falling_factorial(n, 2 * i));
        }
    }
}
