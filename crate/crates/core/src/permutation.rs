use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A bijection on `0..n`, stored as its image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::input(format!("{images:?} is not a permutation of 0..{n}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The transposition exchanging `x` and `y`.
    pub fn transposition(n: usize, x: usize, y: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(x, y);
        Permutation { images }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.images[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (v, &img) in self.images.iter().enumerate() {
            inv[img] = v;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation { images: other.images.iter().map(|&v| self.images[v]).collect() }
    }

    /// Advances to the next permutation in lexicographic order of the image
    /// vector; returns `false` (leaving `self` unchanged) at the last one.
    pub fn next_lex(&mut self) -> bool {
        next_lex(&mut self.images)
    }

    /// Position of `self` in the lexicographic order of all `n!` permutations.
    pub fn lex_rank(&self) -> usize {
        lex_rank(&self.images)
    }

    pub fn one_indexed(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }
}

pub(crate) fn next_lex(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

pub(crate) fn lex_rank(a: &[usize]) -> usize {
    let n = a.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = a[i + 1..].iter().filter(|&&v| v < a[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// `n!` as f64.
pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn lex_enumeration_counts() {
        let mut p = Permutation::identity(5);
        let mut count = 1;
        let mut prev = p.clone();
        while p.next_lex() {
            assert!(prev.images() < p.images());
            prev = p.clone();
            assert_eq!(p.lex_rank(), count);
            count += 1;
        }
        assert_eq!(count, 120);
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let q = Permutation::new(vec![1, 3, 0, 2]).unwrap();
        let pq = p.compose(&q);
        for v in 0..4 {
            assert_eq!(pq.apply(v), p.apply(q.apply(v)));
        }
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
    }
}
