//! Instance generators: Steiner triple systems, crosscut hypergraphs, random
//! hypergraphs and the scaled canonical family.
//!
//! An STS meets a crosscut in exactly `|A||B|/2` triples under every
//! relabelling: each pair across the cut lies in one triple, and each triple
//! meeting both sides holds exactly two such pairs.

use rand::Rng;
use serde::Serialize;

use crate::canonical::orthoset;
use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::rng::{stream_rng, streams};
use crate::weighting::{check_dims, Weighting};

/// Triples of an STS on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerSystem {
    pub n: usize,
    pub triples: Vec<[usize; 3]>,
}

impl SteinerSystem {
    /// Bose construction for `n ≡ 3 (mod 6)`, Skolem for `n ≡ 1 (mod 6)`;
    /// pair coverage is checked before returning.
    pub fn new(n: usize) -> Result<Self> {
        if n < 7 || !matches!(n % 6, 1 | 3) {
            return Err(Error::input(format!("a Steiner triple system here needs n ≡ 1 or 3 (mod 6) and n >= 7, got {n}")));
        }
        if n > crate::combinatorics::MAX_VERTICES {
            return Err(Error::capacity(format!("n = {n} exceeds {}", crate::combinatorics::MAX_VERTICES)));
        }
        let triples = if n % 6 == 3 { bose(n / 3) } else { skolem(n / 6) };
        let sts = SteinerSystem { n, triples };
        sts.verify()?;
        Ok(sts)
    }

    /// Checks that every pair lies in exactly one triple.
    pub fn verify(&self) -> Result<()> {
        let n = self.n;
        let mut count = vec![0u8; n * n];
        for t in &self.triples {
            if t.iter().any(|&v| v >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::input(format!("malformed triple {t:?}")));
            }
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                count[a.min(b) * n + a.max(b)] += 1;
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if count[a * n + b] != 1 {
                    return Err(Error::input(format!("pair {{{a},{b}}} covered {} times", count[a * n + b])));
                }
            }
        }
        Ok(())
    }

    pub fn to_weighting(&self) -> Weighting {
        let edges: Vec<Vec<usize>> = self.triples.iter().map(|t| sorted(*t).to_vec()).collect();
        Weighting::indicator(self.n, 3, edges.iter().map(Vec::as_slice)).expect("verified triples")
    }
}

fn sorted(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// `n = 3m`, `m` odd; vertex `(x, i)` is `i·m + x`.
fn bose(m: usize) -> Vec<[usize; 3]> {
    let half = m.div_ceil(2);
    let op = |a: usize, b: usize| (a + b) * half % m;
    let v = |x: usize, i: usize| (i % 3) * m + x;
    let mut out: Vec<[usize; 3]> = (0..m).map(|x| [v(x, 0), v(x, 1), v(x, 2)]).collect();
    for i in 0..3 {
        for x in 0..m {
            for y in x + 1..m {
                out.push([v(x, i), v(y, i), v(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// `n = 6t + 1`; vertex `(x, i)` is `i·2t + x` and `∞` is `6t`.
fn skolem(t: usize) -> Vec<[usize; 3]> {
    let q = 2 * t;
    let sigma = |s: usize| if s % 2 == 0 { s / 2 } else { t + s / 2 };
    let op = |a: usize, b: usize| sigma((a + b) % q);
    let v = |x: usize, i: usize| (i % 3) * q + x;
    let inf = 6 * t;
    let mut out: Vec<[usize; 3]> = (0..t).map(|x| [v(x, 0), v(x, 1), v(x, 2)]).collect();
    for i in 0..3 {
        for x in 0..t {
            out.push([inf, v(x + t, i), v(x, i + 1)]);
        }
        for x in 0..q {
            for y in x + 1..q {
                out.push([v(x, i), v(y, i), v(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Indicator weighting of an STS on `n` vertices.
pub fn sts(n: usize) -> Result<Weighting> {
    Ok(SteinerSystem::new(n)?.to_weighting())
}

fn check_side(n: usize, a: &[usize]) -> Result<u64> {
    check_dims(n, 3)?;
    let mut mask = 0u64;
    for &v in a {
        if v >= n {
            return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
        }
        if mask & (1 << v) != 0 {
            return Err(Error::input(format!("vertex {v} repeated in A")));
        }
        mask |= 1 << v;
    }
    if a.is_empty() || a.len() == n {
        return Err(Error::input("A must be a nonempty proper subset of the vertices"));
    }
    Ok(mask)
}

/// All triples meeting both `A` and its complement.
pub fn crosscut(n: usize, a: &[usize]) -> Result<Weighting> {
    let mask = check_side(n, a)?;
    Weighting::from_fn(n, 3, |e| {
        let inside = e.iter().filter(|&&v| mask & (1 << v) != 0).count();
        if inside == 1 || inside == 2 { 1.0 } else { 0.0 }
    })
}

/// `(crosscut(n, A), sts(n))`, whose intersection is `|A||B|/2` under every relabelling.
pub fn zero_disc_pair(n: usize, a: &[usize]) -> Result<(Weighting, Weighting)> {
    check_side(n, a)?;
    let (sa, sb) = (a.len(), n - a.len());
    if sa * sb % 2 != 0 {
        return Err(Error::input(format!(
            "|A||B| = {sa}·{sb} is odd, but the STS meets the crosscut in |A||B|/2 triples, so it must be even"
        )));
    }
    Ok((crosscut(n, a)?, sts(n)?))
}

/// Each edge present independently with probability `p`; draw `index` of the stream.
pub fn random_hypergraph_indexed(n: usize, k: usize, p: f64, seed: u64, index: u64) -> Result<Weighting> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability {p} outside [0,1]")));
    }
    check_dims(n, k)?;
    let mut rng = stream_rng(seed, streams::RANDOM_HYPERGRAPH, index);
    Weighting::from_fn(n, k, |_| if rng.random_bool(p) { 1.0 } else { 0.0 })
}

pub fn random_hypergraph(n: usize, k: usize, p: f64, seed: u64) -> Result<Weighting> {
    random_hypergraph_indexed(n, k, p, seed, 0)
}

/// The `k` rescaled canonical weightings with pairwise discrepancy zero.
pub fn scaled_phi_family(n: usize, k: usize) -> Result<Vec<Weighting>> {
    orthoset(n, k)
}

/// Indicator of the `k`-sets inside `{0, ..., s−1}`: a clique plus isolated vertices.
pub fn clique(n: usize, k: usize, s: usize) -> Result<Weighting> {
    if s > n {
        return Err(Error::input(format!("clique on {s} vertices does not fit in n = {n}")));
    }
    Weighting::from_fn(n, k, |e| if e.last().is_none_or(|&v| v < s) { 1.0 } else { 0.0 })
}

/// Pairwise edge-disjoint relabelled copies of one STS and their union.
#[derive(Clone, Debug, Serialize)]
pub struct StsUnion {
    pub relabellings: Vec<Permutation>,
    #[serde(skip)]
    pub union: Weighting,
}

/// Searches for `copies` pairwise edge-disjoint copies of `sts(n)`: cyclic
/// shifts first, then `attempts` seeded random relabellings, added greedily.
/// Reports failure rather than guaranteeing success.
pub fn disjoint_sts_union(n: usize, copies: usize, seed: u64, attempts: usize) -> Result<StsUnion> {
    let base = sts(n)?;
    let mut union = base.clone();
    let mut relabellings = vec![Permutation::identity(n)];
    let shifts = (1..n).map(|s| Permutation::new((0..n).map(|v| (v + s) % n).collect()).expect("shift"));
    let randoms = (0..attempts as u64).map(|i| Permutation::random(n, &mut stream_rng(seed, streams::STS_RELABEL, i)));
    for pi in shifts.chain(randoms) {
        if relabellings.len() >= copies {
            break;
        }
        let cand = base.permute(&pi);
        if union.weights().iter().zip(cand.weights()).all(|(a, b)| *a == 0.0 || *b == 0.0) {
            union = &union + &cand;
            relabellings.push(pi);
        }
    }
    if relabellings.len() < copies {
        return Err(Error::input(format!(
            "found only {} edge-disjoint copies of the STS on {n} vertices (wanted {copies})",
            relabellings.len()
        )));
    }
    Ok(StsUnion { relabellings, union })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::binomial;
    use crate::discrepancy::{disc_exact, intersection};

    #[test]
    fn steiner_systems_cover_pairs() {
        for n in (7..=31).filter(|n| matches!(n % 6, 1 | 3)) {
            let s = SteinerSystem::new(n).unwrap();
            assert_eq!(s.triples.len(), n * (n - 1) / 6, "n = {n}");
            assert_eq!(s.to_weighting().total() as usize, n * (n - 1) / 6);
        }
        assert_eq!(SteinerSystem::new(9).unwrap().triples.len(), 12);
        for bad in [3, 6, 8, 10, 11] {
            assert!(sts(bad).is_err());
        }
        let mut broken = SteinerSystem::new(7).unwrap();
        broken.triples[0] = [0, 1, 2];
        broken.triples[1] = [0, 1, 2];
        assert!(broken.verify().is_err());
    }

    #[test]
    fn crosscut_counts() {
        assert_eq!(crosscut(7, &[0, 1, 2]).unwrap().total(), 30.0);
        let single = crosscut(8, &[3]).unwrap();
        assert_eq!(single.total(), binomial(7, 2) as f64);
        assert!(single.support().iter().all(|(e, _)| e.contains(&3)));
        assert!(crosscut(5, &[]).is_err());
        assert!(crosscut(4, &[0, 1, 2, 3]).is_err());
        assert!(crosscut(5, &[1, 1]).is_err());
    }

    #[test]
    fn zero_discrepancy_at_seven() {
        let (g, h) = zero_disc_pair(7, &[0, 1, 2]).unwrap();
        let r = disc_exact(&g, &h).unwrap();
        assert_eq!((r.max_intersection, r.min_intersection), (6.0, 6.0));
        assert_eq!((r.disc_plus, r.disc_minus, r.disc), (0.0, 0.0, 0.0));
        assert_eq!(disc_exact(&crosscut(7, &[4]).unwrap(), &h).unwrap().disc, 0.0);
        assert!(zero_disc_pair(8, &[0, 1]).is_err());
    }

    #[test]
    fn constant_intersection_under_sampling() {
        for (n, a, expect) in [(9usize, vec![0, 1, 2, 3], 10.0), (13, vec![0, 1, 2, 3, 4, 5], 21.0)] {
            let (g, h) = zero_disc_pair(n, &a).unwrap();
            for s in 0..300 {
                let pi = Permutation::random(n, &mut stream_rng(1, 0, s));
                assert_eq!(intersection(&g, &h, &pi).unwrap(), expect);
            }
        }
    }

    #[test]
    fn disjoint_union_keeps_constant_intersection() {
        let u = disjoint_sts_union(9, 2, 0, 2000).unwrap();
        assert_eq!(u.union.total(), 24.0);
        assert!(u.union.weights().iter().all(|&x| x == 0.0 || x == 1.0));
        let g = crosscut(9, &[0, 1, 2, 3]).unwrap();
        for s in 0..200 {
            let pi = Permutation::random(9, &mut stream_rng(2, 0, s));
            assert_eq!(intersection(&g, &u.union, &pi).unwrap(), 20.0);
        }
    }

    #[test]
    fn random_hypergraphs() {
        assert!(random_hypergraph(8, 3, 0.0, 1).unwrap().is_zero());
        assert_eq!(random_hypergraph(8, 3, 1.0, 1).unwrap(), Weighting::ones(8, 3).unwrap());
        assert!(random_hypergraph(8, 3, 1.5, 1).is_err());
        assert_eq!(random_hypergraph(8, 3, 0.5, 4).unwrap(), random_hypergraph(8, 3, 0.5, 4).unwrap());
        let m = binomial(12, 3) as f64;
        let p = 0.3;
        let edges = random_hypergraph(12, 3, p, 5).unwrap().total();
        assert!((edges - p * m).abs() <= 4.0 * (m * p * (1.0 - p)).sqrt());
    }

    #[test]
    fn cliques() {
        let c = clique(7, 3, 4).unwrap();
        assert_eq!(c.total(), 4.0);
        assert_eq!(clique(7, 3, 2).unwrap().total(), 0.0);
        assert_eq!(clique(7, 0, 0).unwrap().total(), 1.0);
    }
}
