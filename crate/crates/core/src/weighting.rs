//! Weighted k-uniform hypergraphs and the algebra on them.

use std::ops::{Add, Sub};

use crate::combinatorics::{binomial, rank_mask, rank_sorted, KSubsets, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Largest supported edge count `C(n, k)`.
pub const MAX_EDGES: u64 = 10_000_000;

/// A real weight on every k-subset of `0..n`, indexed by colex rank.
#[derive(Clone, Debug, PartialEq)]
pub struct Weighting {
    n: usize,
    k: usize,
    weights: Vec<f64>,
}

pub(crate) fn check_dims(n: usize, k: usize) -> Result<usize> {
    if k > n {
        return Err(Error::input(format!("uniformity k = {k} exceeds vertex count n = {n}")));
    }
    if n > MAX_VERTICES {
        return Err(Error::capacity(format!("n = {n} exceeds the supported maximum {MAX_VERTICES}")));
    }
    let m = binomial(n, k);
    if m > MAX_EDGES {
        return Err(Error::capacity(format!("C({n},{k}) = {m} exceeds the edge limit {MAX_EDGES}")));
    }
    Ok(m as usize)
}

impl Weighting {
    pub fn from_weights(n: usize, k: usize, weights: Vec<f64>) -> Result<Self> {
        let m = check_dims(n, k)?;
        if weights.len() != m {
            return Err(Error::input(format!("expected C({n},{k}) = {m} weights, got {}", weights.len())));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::input(format!("weight at index {i} is not finite")));
        }
        Ok(Weighting { n, k, weights })
    }

    pub fn constant(n: usize, k: usize, value: f64) -> Result<Self> {
        let m = check_dims(n, k)?;
        if !value.is_finite() {
            return Err(Error::input("constant weight is not finite"));
        }
        Ok(Weighting { n, k, weights: vec![value; m] })
    }

    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        Self::constant(n, k, 0.0)
    }

    /// The all-ones weighting.
    pub fn ones(n: usize, k: usize) -> Result<Self> {
        Self::constant(n, k, 1.0)
    }

    /// Builds a weighting by evaluating `f` on each edge (sorted vertices) in colex order.
    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        check_dims(n, k)?;
        let weights: Vec<f64> = KSubsets::new(n, k).map(|e| f(&e)).collect();
        Self::from_weights(n, k, weights)
    }

    /// Indicator weighting of an edge list.
    pub fn indicator<'a>(n: usize, k: usize, edges: impl IntoIterator<Item = &'a [usize]>) -> Result<Self> {
        let mut w = Self::zeros(n, k)?;
        for e in edges {
            let mut e = e.to_vec();
            e.sort_unstable();
            if e.len() != k || e.windows(2).any(|p| p[0] == p[1]) || e.iter().any(|&v| v >= n) {
                return Err(Error::input(format!("{e:?} is not a {k}-subset of 0..{n}")));
            }
            w.weights[rank_sorted(&e)] = 1.0;
        }
        Ok(w)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_edges(&self) -> usize {
        self.weights.len()
    }

    /// Weight of a sorted edge.
    #[inline]
    pub fn get(&self, edge: &[usize]) -> f64 {
        debug_assert_eq!(edge.len(), self.k);
        self.weights[rank_sorted(edge)]
    }

    #[inline]
    pub fn get_mask(&self, mask: u64) -> f64 {
        self.weights[rank_mask(mask)]
    }

    pub fn same_shape(&self, other: &Weighting) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::input(format!(
                "dimension mismatch: (n,k) = ({},{}) vs ({},{})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    /// `w(V)`, the total weight.
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `<w, u>`.
    pub fn inner(&self, other: &Weighting) -> Result<f64> {
        self.same_shape(other)?;
        Ok(dot(&self.weights, &other.weights))
    }

    pub fn l1_norm(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        dot(&self.weights, &self.weights).sqrt()
    }

    /// `d(w) = w(V) / C(n, k)`.
    pub fn density(&self) -> f64 {
        self.total() / self.weights.len() as f64
    }

    /// `w(S)`: total weight of the edges contained in `subset`.
    pub fn induced_weight(&self, subset: &[usize]) -> Result<f64> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != subset.len() {
            return Err(Error::input("vertex subset has repeated vertices"));
        }
        if s.last().is_some_and(|&v| v >= self.n) {
            return Err(Error::input(format!("vertex subset leaves 0..{}", self.n)));
        }
        if s.len() < self.k {
            return Ok(0.0);
        }
        let mut total = 0.0;
        let mut edge = vec![0; self.k];
        for local in KSubsets::new(s.len(), self.k) {
            for (slot, &i) in edge.iter_mut().zip(&local) {
                *slot = s[i];
            }
            total += self.get(&edge);
        }
        Ok(total)
    }

    /// `w_π(e) = w(π⁻¹ e)`.
    pub fn permute(&self, pi: &Permutation) -> Weighting {
        assert_eq!(pi.len(), self.n, "permutation size does not match vertex count");
        let mut out = vec![0.0; self.weights.len()];
        for (r, e) in KSubsets::new(self.n, self.k).enumerate() {
            let mask = e.iter().fold(0u64, |m, &v| m | (1u64 << pi.apply(v)));
            out[rank_mask(mask)] = self.weights[r];
        }
        Weighting { n: self.n, k: self.k, weights: out }
    }

    /// Difference weighting `w^{xy}(e) = w(e ∪ {x}) − w(e ∪ {y})` on the
    /// (k−1)-subsets of `V ∖ {x, y}`. The ground set of the result is
    /// relabelled to `0..n−2` by the order-preserving map.
    pub fn diff_weighting(&self, x: usize, y: usize) -> Result<Weighting> {
        if x == y {
            return Err(Error::input(format!("difference weighting needs distinct vertices, got {x} twice")));
        }
        if x >= self.n || y >= self.n {
            return Err(Error::input(format!("vertex out of range for n = {}", self.n)));
        }
        if self.k == 0 {
            return Err(Error::input("difference weighting needs k >= 1"));
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != x && v != y).collect();
        let (n2, k2) = (self.n - 2, self.k - 1);
        let mut out = Vec::with_capacity(binomial(n2, k2) as usize);
        for e in KSubsets::new(n2, k2) {
            let base = e.iter().fold(0u64, |m, &v| m | (1u64 << keep[v]));
            out.push(self.get_mask(base | (1 << x)) - self.get_mask(base | (1 << y)));
        }
        Ok(Weighting { n: n2, k: k2, weights: out })
    }

    /// Splits `w = w0 + w1` with `w0` the constant `d(w)` and `w1(V) = 0`.
    pub fn split_constant(&self) -> (Weighting, Weighting) {
        let d = self.density();
        let w0 = Weighting { n: self.n, k: self.k, weights: vec![d; self.weights.len()] };
        let w1 = Weighting { n: self.n, k: self.k, weights: self.weights.iter().map(|w| w - d).collect() };
        (w0, w1)
    }

    pub fn scale(&self, factor: f64) -> Weighting {
        Weighting { n: self.n, k: self.k, weights: self.weights.iter().map(|w| w * factor).collect() }
    }

    pub fn add_constant(&self, c: f64) -> Weighting {
        Weighting { n: self.n, k: self.k, weights: self.weights.iter().map(|w| w + c).collect() }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Weighting {
        Weighting { n: self.n, k: self.k, weights: self.weights.iter().map(|&w| f(w)).collect() }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &Weighting) -> Result<Weighting> {
        self.same_shape(other)?;
        let weights = self.weights.iter().zip(&other.weights).map(|(a, b)| a + factor * b).collect();
        Ok(Weighting { n: self.n, k: self.k, weights })
    }

    /// Largest edgewise absolute difference.
    pub fn max_abs_diff(&self, other: &Weighting) -> f64 {
        assert_eq!((self.n, self.k), (other.n, other.k));
        self.weights.iter().zip(&other.weights).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }

    /// Edges with nonzero weight as (sorted vertices, weight), in colex order.
    pub fn support(&self) -> Vec<(Vec<usize>, f64)> {
        KSubsets::new(self.n, self.k)
            .zip(&self.weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(e, &w)| (e, w))
            .collect()
    }
}

impl Add for &Weighting {
    type Output = Weighting;

    fn add(self, rhs: &Weighting) -> Weighting {
        self.axpy(1.0, rhs).expect("adding weightings of different shapes")
    }
}

impl Sub for &Weighting {
    type Output = Weighting;

    fn sub(self, rhs: &Weighting) -> Weighting {
        self.axpy(-1.0, rhs).expect("subtracting weightings of different shapes")
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Bitmask of every edge of `0..n` choose `k`, in colex order.
pub(crate) fn edge_masks(n: usize, k: usize) -> Vec<u64> {
    KSubsets::new(n, k).map(|e| e.iter().fold(0u64, |m, &v| m | (1u64 << v))).collect()
}
