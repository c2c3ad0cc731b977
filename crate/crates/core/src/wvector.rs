//! W-vectors and the procedures driven by them.
//!
//! `W_0 = |d(w)|` and `W_i = E'_{x,y} W_{i−1}(w^{xy})`, bottoming out at arity
//! 0 where the W-vector of the single weight `w(∅)` is `(|w(∅)|)`.
//! Equivalently `W_i = E_π |<w_π, φ_i*>|`, an average over the preimage of the
//! canonical sequence, which is what [`wvector_canonical`] evaluates.
//!
//! `W(w^{yx}) = W(−w^{xy}) = W(w^{xy})`, so averages over ordered pairs are
//! taken over unordered ones, and the canonical average over ordered tuples
//! reduces to pair matchings.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial_f64, for_each_pair_matching, pair_matching_count};
use crate::canonical::phi_inner;
use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::rng::{stream_rng, streams};
use crate::weighting::Weighting;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WMethod {
    Recursive,
    Canonical,
    Mc,
}

#[derive(Clone, Debug, Serialize)]
pub struct WVector {
    pub n: usize,
    pub k: usize,
    pub method: WMethod,
    #[serde(rename = "W")]
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
}

impl WVector {
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// Largest relative gap to `other`, scaled by the larger of the two entries (and 1e−300).
    pub fn max_rel_diff(&self, other: &WVector) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1e-300))
            .fold(0.0, f64::max)
    }
}

/// Limit on the number of elementary operations an exact W-vector may take.
pub const MAX_WVECTOR_WORK: f64 = 1e10;

fn require_half(w: &Weighting) -> Result<()> {
    if w.n() < 2 * w.k() {
        return Err(Error::input(format!("W-vector needs n >= 2k, got n = {}, k = {}", w.n(), w.k())));
    }
    Ok(())
}

fn recursive_work(n: usize, k: usize) -> f64 {
    (0..k).map(|j| binomial_f64(n - 2 * j, 2)).product::<f64>() * binomial_f64(n, k)
}

/// W-vector straight from the recursive definition.
pub fn wvector_recursive(w: &Weighting) -> Result<WVector> {
    require_half(w)?;
    let work = recursive_work(w.n(), w.k());
    if work > MAX_WVECTOR_WORK {
        return Err(Error::capacity(format!("recursive W-vector at (n,k) = ({},{}) needs ~{work:.2e} operations", w.n(), w.k())));
    }
    Ok(WVector { n: w.n(), k: w.k(), method: WMethod::Recursive, values: recurse(w)?, stderr: None })
}

fn recurse(w: &Weighting) -> Result<Vec<f64>> {
    let (n, k) = (w.n(), w.k());
    let mut out = vec![0.0; k + 1];
    out[0] = w.density().abs();
    if k == 0 {
        return Ok(out);
    }
    for x in 0..n {
        for y in x + 1..n {
            let sub = recurse(&w.diff_weighting(x, y)?)?;
            for (o, s) in out[1..].iter_mut().zip(&sub) {
                *o += s;
            }
        }
    }
    let pairs = binomial_f64(n, 2);
    out[1..].iter_mut().for_each(|o| *o /= pairs);
    Ok(out)
}

fn canonical_work(n: usize, k: usize, i: usize) -> f64 {
    pair_matching_count(n, i) * binomial_f64(n - 2 * i, k - i) * 2f64.powi(i as i32)
}

/// Exact `W_i = E_t |<w, φ_i*(t)>|` over pair matchings `t`.
pub fn wvector_canonical(w: &Weighting) -> Result<WVector> {
    require_half(w)?;
    let (n, k) = (w.n(), w.k());
    let work: f64 = (0..=k).map(|i| canonical_work(n, k, i)).sum();
    if work > MAX_WVECTOR_WORK {
        return Err(Error::capacity(format!("canonical W-vector at (n,k) = ({n},{k}) needs ~{work:.2e} operations")));
    }
    let mut values = vec![w.density().abs()];
    for i in 1..=k {
        let mut tuples = Vec::new();
        for_each_pair_matching(n, i, |t| tuples.extend_from_slice(t));
        let count = tuples.len() / (2 * i);
        let sum: f64 = tuples
            .par_chunks(2 * i)
            .with_min_len(256)
            .map(|t| phi_inner(w, t).abs())
            .collect::<Vec<f64>>()
            .iter()
            .sum();
        values.push(sum / count as f64 / binomial_f64(n - 2 * i, k - i));
    }
    Ok(WVector { n, k, method: WMethod::Canonical, values, stderr: None })
}

/// Monte Carlo estimate of `E_π |<w_π, φ_i*>|` with per-level standard errors.
///
/// Sample `s` draws its permutation from `(seed, WVECTOR_MC, s)`, and
/// `<w_π, φ_i(t)> = <w, φ_i(π⁻¹ t)>` for the standard tuple `t`.
pub fn wvector_mc(w: &Weighting, samples: usize, seed: u64) -> Result<WVector> {
    require_half(w)?;
    if samples == 0 {
        return Err(Error::input("wvector_mc needs at least one sample"));
    }
    let (n, k) = (w.n(), w.k());
    let draws: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let inv = Permutation::random(n, &mut stream_rng(seed, streams::WVECTOR_MC, s)).inverse();
            (1..=k)
                .map(|i| {
                    let t: Vec<usize> = (0..2 * i).map(|v| inv.apply(v)).collect();
                    phi_inner(w, &t).abs() / binomial_f64(n - 2 * i, k - i)
                })
                .collect()
        })
        .collect();
    let mut values = vec![w.density().abs()];
    let mut stderr = vec![0.0];
    for i in 0..k {
        let (m, se) = mean_stderr(draws.iter().map(|d| d[i]));
        values.push(m);
        stderr.push(se);
    }
    Ok(WVector { n, k, method: WMethod::Mc, values, stderr: Some(stderr) })
}

/// Sample mean and standard error of the mean (zero for a single sample).
pub(crate) fn mean_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / count;
    if count < 2.0 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1.0);
    (mean, (var / count).sqrt())
}

/// The explicit upper-bound chain `W_i <= 2^i ‖w‖_1 / C(n,k)` and the lower
/// constant `Σ W_i · n^k / ‖w‖_1`.
#[derive(Clone, Debug, Serialize)]
pub struct ThmbReport {
    pub wvector: Vec<f64>,
    pub sum: f64,
    pub upper_bounds: Vec<f64>,
    pub upper_total: f64,
    pub ratio: Option<f64>,
    pub degenerate: bool,
}

impl ThmbReport {
    /// Whether every `W_i` sits below its bound, with slack `rel_tol` relative to the bound.
    pub fn upper_holds(&self, rel_tol: f64) -> bool {
        self.wvector.iter().zip(&self.upper_bounds).all(|(w, b)| *w <= b * (1.0 + rel_tol))
    }
}

pub fn thmb_bounds(w: &Weighting) -> Result<ThmbReport> {
    let wv = wvector_canonical(w)?;
    let l1 = w.l1_norm();
    let edges = binomial_f64(w.n(), w.k());
    let upper_bounds: Vec<f64> = (0..=w.k()).map(|i| 2f64.powi(i as i32) * l1 / edges).collect();
    let sum: f64 = wv.values.iter().sum();
    let degenerate = l1 == 0.0;
    Ok(ThmbReport {
        upper_total: upper_bounds.iter().sum(),
        ratio: (!degenerate).then(|| sum * (w.n() as f64).powi(w.k() as i32) / l1),
        wvector: wv.values,
        sum,
        upper_bounds,
        degenerate,
    })
}

/// The bound expressions of the pair theorems with constant 1:
/// `S_disc = n^{2k+1} Σ_{i>=1} n^{−i} W_i² U_i²` and
/// `S_exp = n^k Σ_{i>=0} n^{−i/2} W_i U_i`.
#[derive(Clone, Debug, Serialize)]
pub struct PairBounds {
    pub s_disc: f64,
    pub s_exp: f64,
    pub w: Vec<f64>,
    pub u: Vec<f64>,
    /// `Σ_{i>=1} W_i U_i`, zero exactly when no level is shared.
    pub overlap: f64,
}

pub fn pair_lower_bounds(w: &Weighting, u: &Weighting) -> Result<PairBounds> {
    w.same_shape(u)?;
    let (wv, uv) = (wvector_canonical(w)?, wvector_canonical(u)?);
    Ok(pair_bounds_from(w.n(), w.k(), &wv.values, &uv.values))
}

pub(crate) fn pair_bounds_from(n: usize, k: usize, w: &[f64], u: &[f64]) -> PairBounds {
    let nf = n as f64;
    let mut s_disc = 0.0;
    let mut s_exp = 0.0;
    let mut overlap = 0.0;
    for i in 0..=k {
        let p = w[i] * u[i];
        s_exp += nf.powf(-(i as f64) / 2.0) * p;
        if i >= 1 {
            s_disc += nf.powi(-(i as i32)) * p * p;
            overlap += p;
        }
    }
    PairBounds {
        s_disc: s_disc * nf.powi(2 * k as i32 + 1),
        s_exp: s_exp * nf.powi(k as i32),
        w: w.to_vec(),
        u: u.to_vec(),
        overlap,
    }
}

/// Tolerance on `|w(V)|`, relative to `‖w‖_1`, for a family member to count as zero-sum.
pub const ZERO_SUM_TOLERANCE: f64 = 1e-9;

/// Assigns each zero-sum weighting to the class `argmax_{i>=1} W_i` (smallest
/// index on ties). Returns `k` classes of member indices, or nothing for an
/// empty family.
pub fn partition_by_wvector(family: &[Weighting]) -> Result<Vec<Vec<usize>>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let k = first.k();
    let mut classes = vec![Vec::new(); k];
    for (idx, w) in family.iter().enumerate() {
        w.same_shape(first)?;
        if w.total().abs() > ZERO_SUM_TOLERANCE * w.l1_norm() {
            return Err(Error::input(format!("family member {idx} has total weight {} (must be 0)", w.total())));
        }
        if k == 0 {
            return Err(Error::input("partition needs k >= 1"));
        }
        let wv = wvector_canonical(w)?;
        let mut best = 1;
        for i in 2..=k {
            if wv.values[i] > wv.values[best] {
                best = i;
            }
        }
        classes[best - 1].push(idx);
    }
    Ok(classes)
}

/// `E'_{x,y,A} |w(A ∪ x) − w(A ∪ y)|` and its ratio against `n^{−k} ‖w‖_1`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalVariation {
    pub value: f64,
    pub ratio: Option<f64>,
}

pub fn local_variation(w: &Weighting) -> Result<LocalVariation> {
    let (n, k) = (w.n(), w.k());
    if k == 0 || n < 2 {
        return Err(Error::input("local variation needs k >= 1 and n >= 2"));
    }
    let mut total = 0.0;
    for x in 0..n {
        for y in x + 1..n {
            total += w.diff_weighting(x, y)?.l1_norm();
        }
    }
    let value = total / binomial_f64(n, 2) / binomial_f64(n - 2, k - 1);
    let l1 = w.l1_norm();
    Ok(LocalVariation { value, ratio: (l1 > 0.0).then(|| value * (n as f64).powi(k as i32) / l1) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{full_decompose, orthoset, phi, CanonicalSequence};
    use rand::Rng;

    fn random_int(n: usize, k: usize, seed: u64) -> Weighting {
        let mut rng = stream_rng(seed, 90, 0);
        Weighting::from_fn(n, k, |_| rng.random_range(-5i32..=5) as f64).unwrap()
    }

    #[test]
    fn constant_weighting() {
        let w = Weighting::constant(7, 3, -2.5).unwrap();
        for wv in [wvector_recursive(&w).unwrap(), wvector_canonical(&w).unwrap(), wvector_mc(&w, 17, 3).unwrap()] {
            assert_eq!(wv.values, vec![2.5, 0.0, 0.0, 0.0]);
        }
        assert_eq!(wvector_canonical(&Weighting::ones(8, 3).unwrap()).unwrap().values, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn two_vertices_one_uniform() {
        let w = Weighting::from_weights(2, 1, vec![1.0, -1.0]).unwrap();
        assert_eq!(wvector_recursive(&w).unwrap().values, vec![0.0, 2.0]);
        assert_eq!(wvector_canonical(&w).unwrap().values, vec![0.0, 2.0]);
    }

    #[test]
    fn phi_has_single_level() {
        for j in 1..=2 {
            let p = phi(6, 2, &CanonicalSequence::standard(j)).unwrap();
            for wv in [wvector_recursive(&p).unwrap(), wvector_canonical(&p).unwrap()] {
                for i in 0..=2 {
                    assert_eq!(wv.values[i] > 1e-12, i == j, "level {i} of phi_{j}: {:?}", wv.values);
                }
            }
        }
    }

    #[test]
    fn recursive_matches_canonical() {
        for (n, k) in [(6, 2), (7, 3), (8, 2), (8, 4), (5, 1)] {
            for seed in 0..5 {
                let w = random_int(n, k, seed);
                let a = wvector_recursive(&w).unwrap();
                let b = wvector_canonical(&w).unwrap();
                assert!(a.max_rel_diff(&b) < 1e-12, "({n},{k}) {:?} vs {:?}", a.values, b.values);
            }
        }
    }

    #[test]
    fn invariance_and_scaling() {
        let w = random_int(7, 3, 4);
        let base = wvector_canonical(&w).unwrap();
        let pi = Permutation::random(7, &mut stream_rng(1, 0, 0));
        assert!(wvector_canonical(&w.permute(&pi)).unwrap().max_rel_diff(&base) < 1e-12);
        let scaled = wvector_canonical(&w.scale(-3.0)).unwrap();
        for (a, b) in scaled.values.iter().zip(&base.values) {
            assert!((a - 3.0 * b).abs() < 1e-12 * a.max(1.0));
        }
        assert!(wvector_canonical(&w.split_constant().1).unwrap().values[0].abs() < 1e-15);
    }

    #[test]
    fn mc_is_reproducible_and_consistent() {
        let w = random_int(7, 3, 8);
        let a = wvector_mc(&w, 4000, 5).unwrap();
        let b = wvector_mc(&w, 4000, 5).unwrap();
        assert_eq!(a.values, b.values);
        let exact = wvector_canonical(&w).unwrap();
        let se = a.stderr.as_ref().unwrap();
        for i in 1..=3 {
            assert!((a.values[i] - exact.values[i]).abs() <= 3.0 * se[i] + 1e-12, "level {i}");
        }
    }

    #[test]
    fn upper_bound_chain() {
        for seed in 0..10 {
            let r = thmb_bounds(&random_int(7, 3, seed)).unwrap();
            assert!(r.upper_holds(1e-12));
            assert!(r.ratio.unwrap() > 0.0);
        }
        assert!(thmb_bounds(&Weighting::zeros(6, 2).unwrap()).unwrap().degenerate);
    }

    #[test]
    fn pair_bounds_zero_patterns() {
        let set = orthoset(6, 2).unwrap();
        let b = pair_lower_bounds(&set[0], &set[1]).unwrap();
        assert!(b.s_disc.abs() < 1e-12 && b.s_exp.abs() < 1e-12);
        let b = pair_lower_bounds(&random_int(6, 2, 1), &Weighting::ones(6, 2).unwrap()).unwrap();
        assert_eq!(b.s_disc, 0.0);
    }

    #[test]
    fn partitions() {
        assert!(partition_by_wvector(&[]).unwrap().is_empty());
        let set = orthoset(8, 3).unwrap();
        assert_eq!(partition_by_wvector(&set).unwrap(), vec![vec![0], vec![1], vec![2]]);
        let family: Vec<Weighting> = (0..4).map(|s| random_int(7, 3, s).split_constant().1).collect();
        let classes = partition_by_wvector(&family).unwrap();
        assert!(classes.iter().any(|c| c.len() >= 2));
        assert!(partition_by_wvector(&[Weighting::ones(7, 3).unwrap()]).is_err());
    }

    #[test]
    fn nonzero_components_match_wvector_support() {
        let w = random_int(6, 2, 3);
        let dec = full_decompose(&w).unwrap();
        let wv = wvector_canonical(&w).unwrap();
        let edges = binomial_f64(6, 2);
        for (j, c) in dec.components.iter().enumerate() {
            assert_eq!(c.l1_norm() > 1e-9, wv.values[j] > 1e-9 * w.l1_norm() / edges);
        }
    }

    #[test]
    fn local_variation_is_positive() {
        let w = random_int(7, 3, 2).split_constant().1;
        assert!(local_variation(&w).unwrap().ratio.unwrap() > 0.0);
        assert_eq!(local_variation(&Weighting::ones(7, 3).unwrap()).unwrap().value, 0.0);
    }
}
