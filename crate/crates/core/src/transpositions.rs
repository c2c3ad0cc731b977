//! Families of disjoint transpositions, `δ`, `Δ`, `tr(e)`, the expected effect
//! of a random subfamily as a polynomial in `p`, and `γ(w, u)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::binomial_f64;
use crate::discrepancy::{all_intersections, intersection, permutation_stats, Estimate};
use crate::error::{Error, Result};
use crate::permutation::{lex_rank, Permutation};
use crate::rng::{stream_rng, streams};
use crate::weighting::{edge_masks, Weighting};
use crate::wvector::mean_stderr;

/// Disjoint vertex pairs `{x_i, y_i}`, `i ∈ I = 0..len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranspositionFamily {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl TranspositionFamily {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &(x, y) in &pairs {
            for v in [x, y] {
                if v >= n {
                    return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
                }
                if seen[v] {
                    return Err(Error::input(format!("vertex {v} appears in more than one transposition")));
                }
                seen[v] = true;
            }
            if x == y {
                return Err(Error::input(format!("transposition ({x} {x}) is not a swap")));
            }
        }
        Ok(TranspositionFamily { n, pairs })
    }

    /// `(0 1), (2 3), ...`, `⌊n/2⌋` pairs.
    pub fn standard(n: usize) -> Self {
        TranspositionFamily { n, pairs: (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `τ^J` for `J` given as indices into the family.
    pub fn product(&self, j: &[usize]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..self.n).collect();
        let mut used = vec![false; self.len()];
        for &i in j {
            if i >= self.len() {
                return Err(Error::input(format!("index {i} outside the family of size {}", self.len())));
            }
            if used[i] {
                return Err(Error::input(format!("index {i} repeated in J")));
            }
            used[i] = true;
            let (x, y) = self.pairs[i];
            images.swap(x, y);
        }
        Permutation::new(images)
    }

    fn product_mask(&self, mask: u32) -> Permutation {
        let j: Vec<usize> = (0..self.len()).filter(|&i| mask & (1 << i) != 0).collect();
        self.product(&j).expect("mask within family")
    }

    /// `tr(e) = {i : |e ∩ {x_i, y_i}| = 1}`.
    pub fn tr(&self, edge: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let (x, y) = self.pairs[i];
                edge.contains(&x) != edge.contains(&y)
            })
            .collect()
    }
}

fn check_family(w: &Weighting, u: &Weighting, family: &TranspositionFamily) -> Result<()> {
    w.same_shape(u)?;
    if family.n() != w.n() {
        return Err(Error::input(format!("family on {} vertices for n = {}", family.n(), w.n())));
    }
    Ok(())
}

/// `δ = <w, u> − <w_τ, u>` for `τ = (x y)`, computed directly.
pub fn delta(w: &Weighting, u: &Weighting, x: usize, y: usize) -> Result<f64> {
    w.same_shape(u)?;
    if x == y {
        return Err(Error::input(format!("delta needs distinct vertices, got {x} twice")));
    }
    if x >= w.n() || y >= w.n() {
        return Err(Error::input(format!("vertex out of range for n = {}", w.n())));
    }
    Ok(w.inner(u)? - intersection(w, u, &Permutation::transposition(w.n(), x, y))?)
}

/// `<w^{xy}, u^{xy}>`.
pub fn delta_wwt(w: &Weighting, u: &Weighting, x: usize, y: usize) -> Result<f64> {
    w.same_shape(u)?;
    w.diff_weighting(x, y)?.inner(&u.diff_weighting(x, y)?)
}

/// `δ(i)` for every pair of the family.
pub fn deltas(w: &Weighting, u: &Weighting, family: &TranspositionFamily) -> Result<Vec<f64>> {
    check_family(w, u, family)?;
    family.pairs().iter().map(|&(x, y)| delta(w, u, x, y)).collect()
}

/// `Δ(J) = Σ_{i∈J} |δ(i)|`.
pub fn big_delta(w: &Weighting, u: &Weighting, family: &TranspositionFamily, j: &[usize]) -> Result<f64> {
    let d = deltas(w, u, family)?;
    j.iter()
        .map(|&i| d.get(i).map(|v| v.abs()).ok_or_else(|| Error::input(format!("index {i} outside the family"))))
        .sum()
}

/// `w_{τ^J}`.
pub fn apply_family(w: &Weighting, family: &TranspositionFamily, j: &[usize]) -> Result<Weighting> {
    if family.n() != w.n() {
        return Err(Error::input(format!("family on {} vertices for n = {}", family.n(), w.n())));
    }
    Ok(w.permute(&family.product(j)?))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Both sides of `<w,u> − <w_{τ^J},u> = ½ Σ_e (w(e) − w(τ^J e))(u(e) − u(τ^J e))`.
pub fn decomp_identity_check(w: &Weighting, u: &Weighting, family: &TranspositionFamily, j: &[usize]) -> Result<IdentityCheck> {
    check_family(w, u, family)?;
    let t = family.product(j)?;
    let lhs = w.inner(u)? - intersection(w, u, &t)?;
    let mut rhs = 0.0;
    for (&m, (&we, &ue)) in edge_masks(w.n(), w.k()).iter().zip(w.weights().iter().zip(u.weights())) {
        let mut image = 0u64;
        let mut bits = m;
        while bits != 0 {
            image |= 1u64 << t.apply(bits.trailing_zeros() as usize);
            bits &= bits - 1;
        }
        rhs += (we - w.get_mask(image)) * (ue - u.get_mask(image));
    }
    rhs *= 0.5;
    Ok(IdentityCheck { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// `E_J[<w,u> − <w_{τ^J},u>]` for `J ∋ i` independently with probability `p`,
/// expanded in powers of `p`.
#[derive(Clone, Debug, Serialize)]
pub struct PolyCoeffs {
    /// `A_1, ..., A_k` (the coefficients of `p, ..., p^k`).
    pub coefficients: Vec<f64>,
    pub constant_term: f64,
    /// Sum of `|coefficient|` over powers above `k`; zero in exact arithmetic.
    pub higher_residual: f64,
    /// `δ(I) = Σ_i δ(i)`, which must equal `A_1`.
    pub delta_sum: f64,
    /// `<w,u> − <w_{τ^I},u>`, the value of the polynomial at `p = 1`.
    pub full_difference: f64,
}

impl PolyCoeffs {
    pub fn eval(&self, p: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| (acc + c) * p) + self.constant_term
    }
}

/// Largest family size for [`poly_coeffs`].
pub const MAX_POLY_FAMILY: usize = 16;

pub fn poly_coeffs(w: &Weighting, u: &Weighting, family: &TranspositionFamily) -> Result<PolyCoeffs> {
    check_family(w, u, family)?;
    let m = family.len();
    if m > MAX_POLY_FAMILY {
        return Err(Error::capacity(format!("family of {m} transpositions exceeds the limit {MAX_POLY_FAMILY}")));
    }
    let k = w.k();
    let base = w.inner(u)?;
    let diffs: Vec<f64> = (0..1u32 << m)
        .into_par_iter()
        .map(|mask| if mask == 0 { 0.0 } else { base - intersection(w, u, &family.product_mask(mask)).expect("shapes checked") })
        .collect();
    // p^j (1−p)^{m−j} = Σ_d C(m−j, d−j) (−1)^{d−j} p^d
    let mut coeffs = vec![0.0; m + 1];
    for (mask, &dj) in diffs.iter().enumerate() {
        let j = (mask as u32).count_ones() as usize;
        for (d, c) in coeffs.iter_mut().enumerate().skip(j) {
            let sign = if (d - j) % 2 == 0 { 1.0 } else { -1.0 };
            *c += dj * sign * binomial_f64(m - j, d - j);
        }
    }
    let delta_sum = deltas(w, u, family)?.iter().sum();
    let mut coefficients: Vec<f64> = coeffs.iter().skip(1).take(k).copied().collect();
    coefficients.resize(k, 0.0);
    Ok(PolyCoeffs {
        constant_term: coeffs[0],
        higher_residual: coeffs.iter().skip(k + 1).map(|c| c.abs()).sum(),
        coefficients,
        delta_sum,
        full_difference: diffs[(1usize << m) - 1],
    })
}

/// Largest `n` for [`gamma_exact`].
pub const MAX_GAMMA_N: usize = 9;

/// Exact `γ(w, u)` via `γ = E_{ρ, {a,b}} |<w_ρ, u> − <w_{(ab)ρ}, u>|`.
///
/// With `ρ = σ⁻¹π` the two-permutation definition becomes this average: the
/// conjugate `σ⁻¹(xy)σ` is a uniform transposition independent of `ρ`.
pub fn gamma_exact(w: &Weighting, u: &Weighting) -> Result<f64> {
    w.same_shape(u)?;
    if w.n() > MAX_GAMMA_N {
        return Err(Error::capacity(format!("gamma_exact enumerates {}! permutations; limit is n <= {MAX_GAMMA_N}", w.n())));
    }
    let n = w.n();
    if n < 2 {
        return Err(Error::input("gamma needs n >= 2"));
    }
    let vals = all_intersections(w, u)?;
    let mut first: Vec<usize> = (0..n).collect();
    let starts: Vec<Vec<usize>> = (0..n)
        .map(|f| {
            first.clear();
            first.push(f);
            first.extend((0..n).filter(|&v| v != f));
            first.clone()
        })
        .collect();
    let block = vals.len() / n;
    let total: f64 = starts
        .into_par_iter()
        .enumerate()
        .map(|(f, mut images)| {
            let mut acc = 0.0;
            let mut pos = vec![0; n];
            for r in f * block..(f + 1) * block {
                for (p, &v) in images.iter().enumerate() {
                    pos[v] = p;
                }
                for a in 0..n {
                    for b in a + 1..n {
                        images.swap(pos[a], pos[b]);
                        acc += (vals[r] - vals[lex_rank(&images)]).abs();
                        images.swap(pos[a], pos[b]);
                    }
                }
                crate::permutation::next_lex(&mut images);
            }
            acc
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(total / vals.len() as f64 / binomial_f64(n, 2))
}

/// Monte Carlo `γ(w, u)` straight from the definition: two independent
/// uniform permutations per sample and the fixed transposition `pair`.
pub fn gamma_mc(w: &Weighting, u: &Weighting, samples: usize, seed: u64, pair: (usize, usize)) -> Result<Estimate> {
    w.same_shape(u)?;
    let n = w.n();
    if samples == 0 {
        return Err(Error::input("gamma_mc needs at least one sample"));
    }
    if pair.0 == pair.1 || pair.0 >= n || pair.1 >= n {
        return Err(Error::input(format!("invalid transposition ({} {}) for n = {n}", pair.0, pair.1)));
    }
    let tau = Permutation::transposition(n, pair.0, pair.1);
    let vals: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, streams::GAMMA_MC, s);
            let pi = Permutation::random(n, &mut rng);
            let sigma = Permutation::random(n, &mut rng);
            let us = u.permute(&sigma);
            let a = w.permute(&pi).inner(&us).expect("same shape");
            let b = w.permute(&tau.compose(&pi)).inner(&us).expect("same shape");
            (a - b).abs()
        })
        .collect();
    let (mean, stderr) = mean_stderr(vals.iter().copied());
    Ok(Estimate { mean, stderr, samples })
}

/// Empirical constants for `disc⁺ disc⁻ >= c² γ² n²` and `E|<w_π,u>| >= c γ √n`.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub gamma: f64,
    pub disc_plus: f64,
    pub disc_minus: f64,
    pub exp_abs: f64,
    /// `disc⁺ disc⁻ / (γ² n²)`, absent when `γ = 0`.
    pub disc_ratio: Option<f64>,
    /// `E|<w_π,u>| / (γ √n)`, absent when `γ = 0`.
    pub exp_ratio: Option<f64>,
}

pub fn thmf_thme_ratios(w: &Weighting, u: &Weighting) -> Result<RatioReport> {
    let gamma = gamma_exact(w, u)?;
    let st = permutation_stats(w, u)?;
    let baseline = crate::discrepancy::expected_intersection(w, u)?;
    let (disc_plus, disc_minus) = (st.max - baseline, baseline - st.min);
    let exp_abs = st.mean_abs();
    let n = w.n() as f64;
    let positive = gamma > 0.0;
    Ok(RatioReport {
        gamma,
        disc_plus,
        disc_minus,
        exp_abs,
        disc_ratio: positive.then(|| disc_plus * disc_minus / (gamma * gamma * n * n)),
        exp_ratio: positive.then(|| exp_abs / (gamma * n.sqrt())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::orthoset;
    use crate::combinatorics::KSubsets;
    use crate::discrepancy::exp_abs_exact;
    use crate::wvector::wvector_canonical;
    use rand::Rng;

    fn random_int(n: usize, k: usize, seed: u64) -> Weighting {
        let mut rng = stream_rng(seed, 92, 0);
        Weighting::from_fn(n, k, |_| rng.random_range(-3i32..=3) as f64).unwrap()
    }

    #[test]
    fn family_validation() {
        assert!(TranspositionFamily::new(6, vec![(0, 1), (1, 2)]).is_err());
        assert!(TranspositionFamily::new(6, vec![(0, 6)]).is_err());
        assert!(TranspositionFamily::new(6, vec![(3, 3)]).is_err());
        assert_eq!(TranspositionFamily::standard(7).pairs(), &[(0, 1), (2, 3), (4, 5)]);
    }

    #[test]
    fn delta_matches_wwt() {
        for seed in 0..10 {
            let (w, u) = (random_int(7, 3, seed), random_int(7, 3, seed + 50));
            for (x, y) in [(0, 1), (2, 6), (5, 3)] {
                let d = delta(&w, &u, x, y).unwrap();
                assert_eq!(d, delta_wwt(&w, &u, x, y).unwrap());
                assert_eq!(d, delta(&w, &u, y, x).unwrap());
            }
        }
        let w = random_int(6, 2, 1);
        assert_eq!(delta(&w, &Weighting::constant(6, 2, 2.0).unwrap(), 0, 1).unwrap(), 0.0);
        assert!(delta(&w, &w, 2, 2).is_err());
    }

    #[test]
    fn family_products() {
        let w = random_int(8, 3, 3);
        let fam = TranspositionFamily::standard(8);
        assert_eq!(apply_family(&w, &fam, &[]).unwrap(), w);
        let once = apply_family(&w, &fam, &[0, 2, 3]).unwrap();
        assert_eq!(apply_family(&once, &fam, &[0, 2, 3]).unwrap(), w);
        assert_eq!(apply_family(&w, &fam, &[3, 0, 2]).unwrap(), once);
        assert!(apply_family(&w, &fam, &[1, 1]).is_err());
    }

    #[test]
    fn tr_is_invariant() {
        let fam = TranspositionFamily::standard(7);
        for e in KSubsets::new(7, 3) {
            let t = fam.tr(&e);
            for mask in 0u32..8 {
                let p = fam.product_mask(mask);
                let mut img: Vec<usize> = e.iter().map(|&v| p.apply(v)).collect();
                img.sort_unstable();
                assert_eq!(fam.tr(&img), t);
                assert_eq!(fam.tr(&e).iter().all(|&i| mask & (1 << i) == 0), img == e);
            }
        }
    }

    #[test]
    fn decomposition_identity() {
        let fam = TranspositionFamily::standard(7);
        let (w, u) = (random_int(7, 3, 4), random_int(7, 3, 5));
        for mask in 0u32..8 {
            let j: Vec<usize> = (0..3).filter(|&i| mask & (1 << i) != 0).collect();
            let c = decomp_identity_check(&w, &u, &fam, &j).unwrap();
            assert_eq!(c.residual, 0.0);
            if j.is_empty() {
                assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
            }
            if j.len() == 1 {
                let (x, y) = fam.pairs()[j[0]];
                assert_eq!(c.lhs, delta_wwt(&w, &u, x, y).unwrap());
            }
        }
    }

    #[test]
    fn polynomial_structure() {
        let fam = TranspositionFamily::standard(7);
        let (w, u) = (random_int(7, 3, 6), random_int(7, 3, 7));
        let pc = poly_coeffs(&w, &u, &fam).unwrap();
        assert!(pc.constant_term.abs() < 1e-12);
        assert!((pc.coefficients[0] - pc.delta_sum).abs() < 1e-9);
        assert!(pc.higher_residual < 1e-9);
        assert!((pc.eval(1.0) - pc.full_difference).abs() < 1e-9);
        // Direct expectation at p = 0.3.
        let p: f64 = 0.3;
        let base = w.inner(&u).unwrap();
        let mut direct = 0.0;
        for mask in 0u32..8 {
            let j = mask.count_ones() as i32;
            let prob = p.powi(j) * (1.0 - p).powi(3 - j);
            direct += prob * (base - intersection(&w, &u, &fam.product_mask(mask)).unwrap());
        }
        assert!((pc.eval(p) - direct).abs() < 1e-9);

        let (a, b) = (random_int(6, 1, 1), random_int(6, 1, 2));
        let lin = poly_coeffs(&a, &b, &TranspositionFamily::standard(6)).unwrap();
        assert_eq!(lin.coefficients.len(), 1);
        assert!(lin.higher_residual < 1e-12);
        let zero = poly_coeffs(&w, &Weighting::constant(7, 3, 1.0).unwrap(), &fam).unwrap();
        assert!(zero.coefficients.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn gamma_reduction_matches_definition() {
        let (w, u) = (random_int(6, 2, 8), random_int(6, 2, 9));
        let exact = gamma_exact(&w, &u).unwrap();
        for pair in [(0, 1), (2, 5)] {
            let est = gamma_mc(&w, &u, 20_000, 3, pair).unwrap();
            assert!((est.mean - exact).abs() <= 3.0 * est.stderr, "{exact} vs {est:?}");
        }
        assert!(exact <= 2.0 * exp_abs_exact(&w, &u).unwrap() + 1e-9);
        let c = Weighting::constant(6, 2, 3.0).unwrap();
        assert_eq!(gamma_exact(&w, &c).unwrap(), 0.0);
        assert_eq!(gamma_mc(&w, &c, 100, 1, (0, 1)).unwrap().mean, 0.0);
        assert!((gamma_exact(&w.add_constant(2.0), &u).unwrap() - exact).abs() < 1e-9);
    }

    #[test]
    fn gamma_product_law_for_graphs_of_points() {
        let mut w = Weighting::zeros(7, 1).unwrap().weights().to_vec();
        w[0] = 1.0;
        w[1] = -1.0;
        let w = Weighting::from_weights(7, 1, w).unwrap();
        let g = gamma_exact(&w, &w).unwrap();
        let wv = wvector_canonical(&w).unwrap();
        assert!(g > 0.0);
        assert!((g - wv.values[1] * wv.values[1]).abs() < 1e-9);
        let (a, b) = (random_int(7, 1, 3), random_int(7, 1, 4));
        let ga = gamma_exact(&a, &b).unwrap();
        let prod = wvector_canonical(&a).unwrap().values[1] * wvector_canonical(&b).unwrap().values[1];
        assert!((ga - prod).abs() < 1e-9);
    }

    #[test]
    fn ratios() {
        let set = orthoset(6, 2).unwrap();
        let r = thmf_thme_ratios(&set[0], &set[1]).unwrap();
        assert!(r.gamma.abs() < 1e-12 && r.disc_ratio.is_none());
        let (w, u) = (random_int(6, 2, 10), random_int(6, 2, 11));
        let r = thmf_thme_ratios(&w, &u).unwrap();
        assert!(r.disc_ratio.unwrap() > 0.0 && r.exp_ratio.unwrap() > 0.0);
        let s = thmf_thme_ratios(&w.add_constant(1.0), &u).unwrap();
        assert!((s.disc_ratio.unwrap() - r.disc_ratio.unwrap()).abs() < 1e-9);
    }
}
