//! Pair discrepancy, `E_π |<w_π, u>|`, and single-hypergraph discrepancy.
//!
//! `<w_π, u> = Σ_f w(f) u(π f)`, the quantity every engine here optimizes or
//! averages over permutations `π`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binomial, binomial_f64, rank_mask, KSubsets};
use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::rng::{stream_rng, streams};
use crate::weighting::{edge_masks, Weighting};
use crate::wvector::mean_stderr;

/// Largest `n` for exhaustive permutation enumeration.
pub const MAX_EXACT_N: usize = 10;
/// Largest `n` for subset enumeration in [`single_disc`].
pub const MAX_SINGLE_N: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscMethod {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscrepancyReport {
    pub disc_plus: f64,
    pub disc_minus: f64,
    pub disc: f64,
    pub max_intersection: f64,
    pub min_intersection: f64,
    pub argmax_perm: Permutation,
    pub argmin_perm: Permutation,
    pub method: DiscMethod,
    /// `d(w) d(u) C(n,k)`, the mean intersection.
    pub baseline: f64,
}

impl DiscrepancyReport {
    fn new(max: f64, argmax: Permutation, min: f64, argmin: Permutation, baseline: f64, method: DiscMethod) -> Self {
        let disc_plus = max - baseline;
        let disc_minus = baseline - min;
        DiscrepancyReport {
            disc_plus,
            disc_minus,
            disc: disc_plus.max(disc_minus),
            max_intersection: max,
            min_intersection: min,
            argmax_perm: argmax,
            argmin_perm: argmin,
            method,
            baseline,
        }
    }
}

/// `d(w) d(u) C(n,k)`, the average of `<w_π, u>` over all `π`.
pub fn expected_intersection(w: &Weighting, u: &Weighting) -> Result<f64> {
    w.same_shape(u)?;
    Ok(w.total() * u.total() / binomial_f64(w.n(), w.k()))
}

/// `<w_π, u>` without materializing `w_π`.
pub fn intersection(w: &Weighting, u: &Weighting, pi: &Permutation) -> Result<f64> {
    w.same_shape(u)?;
    if pi.len() != w.n() {
        return Err(Error::input(format!("permutation on {} points for n = {}", pi.len(), w.n())));
    }
    Ok(intersection_with(&edge_masks(w.n(), w.k()), w, u, pi))
}

fn intersection_with(masks: &[u64], w: &Weighting, u: &Weighting, pi: &Permutation) -> f64 {
    masks
        .iter()
        .zip(w.weights())
        .filter(|(_, &x)| x != 0.0)
        .map(|(&m, &x)| x * u.get_mask(map_mask(m, pi.images())))
        .sum()
}

#[inline]
fn map_mask(mut m: u64, images: &[usize]) -> u64 {
    let mut out = 0u64;
    while m != 0 {
        out |= 1u64 << images[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    out
}

/// Aggregates of `<w_π, u>` over every permutation.
#[derive(Clone, Debug, Serialize)]
pub struct PermutationStats {
    pub count: f64,
    pub max: f64,
    pub argmax: Permutation,
    pub min: f64,
    pub argmin: Permutation,
    pub sum: f64,
    pub abs_sum: f64,
}

impl PermutationStats {
    pub fn mean(&self) -> f64 {
        self.sum / self.count
    }

    pub fn mean_abs(&self) -> f64 {
        self.abs_sum / self.count
    }
}

fn check_exact(w: &Weighting, u: &Weighting, limit: usize) -> Result<()> {
    w.same_shape(u)?;
    if w.n() > limit {
        return Err(Error::capacity(format!(
            "exact enumeration over {}! permutations exceeds the limit n <= {limit}; use the heuristic or Monte Carlo method",
            w.n()
        )));
    }
    Ok(())
}

/// Depth-first enumeration of `π` in lexicographic order of the image vector.
/// An edge `f` contributes `w(f) u(π f)` once its largest vertex is placed.
struct Enumerator<'a> {
    n: usize,
    by_max: Vec<Vec<(u64, f64)>>,
    u_table: Vec<f64>,
    visit: &'a mut dyn FnMut(&[usize], f64),
}

impl Enumerator<'_> {
    fn new<'a>(w: &Weighting, u: &Weighting, visit: &'a mut dyn FnMut(&[usize], f64)) -> Enumerator<'a> {
        let n = w.n();
        let mut by_max = vec![Vec::new(); n];
        let mut u_table = vec![0.0; 1usize << n];
        for (&m, (&x, &y)) in edge_masks(n, w.k()).iter().zip(w.weights().iter().zip(u.weights())) {
            u_table[m as usize] = y;
            if x != 0.0 && m != 0 {
                by_max[63 - m.leading_zeros() as usize].push((m, x));
            }
        }
        Enumerator { n, by_max, u_table, visit }
    }

    fn run(&mut self, images: &mut Vec<usize>, used: u64, acc: f64, constant: f64) {
        let v = images.len();
        if v == self.n {
            (self.visit)(images, acc + constant);
            return;
        }
        for img in 0..self.n {
            if used & (1 << img) != 0 {
                continue;
            }
            images.push(img);
            let mut add = 0.0;
            for &(m, x) in &self.by_max[v] {
                add += x * self.u_table[map_mask(m, images) as usize];
            }
            self.run(images, used | (1 << img), acc + add, constant);
            images.pop();
        }
    }
}

/// Calls `visit(π, <w_π, u>)` for every `π` with `π(0) = first`, in lex order.
fn enumerate_branch(w: &Weighting, u: &Weighting, first: usize, visit: &mut dyn FnMut(&[usize], f64)) {
    let n = w.n();
    // k = 0 has the single empty edge, which never gets a largest vertex.
    let constant = if w.k() == 0 { w.weights()[0] * u.weights()[0] } else { 0.0 };
    let mut e = Enumerator::new(w, u, visit);
    let mut images = Vec::with_capacity(n);
    images.push(first);
    let mut add = 0.0;
    for &(m, x) in &e.by_max[0] {
        add += x * e.u_table[map_mask(m, &images) as usize];
    }
    e.run(&mut images, 1 << first, add, constant);
}

/// Max, min, sum and absolute sum of `<w_π, u>` over all `n!` permutations.
pub fn permutation_stats(w: &Weighting, u: &Weighting) -> Result<PermutationStats> {
    check_exact(w, u, MAX_EXACT_N)?;
    let n = w.n();
    if n == 0 {
        let v = w.weights()[0] * u.weights()[0];
        let id = Permutation::identity(0);
        return Ok(PermutationStats { count: 1.0, max: v, argmax: id.clone(), min: v, argmin: id, sum: v, abs_sum: v.abs() });
    }
    let parts: Vec<PermutationStats> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut st = Stats::default();
            enumerate_branch(w, u, first, &mut |p, v| st.push(p, v));
            st.finish()
        })
        .collect();
    let mut it = parts.into_iter();
    let mut total = it.next().expect("n >= 1");
    for p in it {
        if p.max > total.max {
            total.max = p.max;
            total.argmax = p.argmax;
        }
        if p.min < total.min {
            total.min = p.min;
            total.argmin = p.argmin;
        }
        total.sum += p.sum;
        total.abs_sum += p.abs_sum;
        total.count += p.count;
    }
    Ok(total)
}

#[derive(Default)]
struct Stats {
    count: f64,
    max: Option<(f64, Vec<usize>)>,
    min: Option<(f64, Vec<usize>)>,
    sum: f64,
    abs_sum: f64,
}

impl Stats {
    fn push(&mut self, p: &[usize], v: f64) {
        self.count += 1.0;
        self.sum += v;
        self.abs_sum += v.abs();
        if self.max.as_ref().is_none_or(|(m, _)| v > *m) {
            self.max = Some((v, p.to_vec()));
        }
        if self.min.as_ref().is_none_or(|(m, _)| v < *m) {
            self.min = Some((v, p.to_vec()));
        }
    }

    fn finish(self) -> PermutationStats {
        let (max, amax) = self.max.expect("at least one permutation");
        let (min, amin) = self.min.expect("at least one permutation");
        PermutationStats {
            count: self.count,
            max,
            argmax: Permutation::new(amax).expect("enumerated permutation"),
            min,
            argmin: Permutation::new(amin).expect("enumerated permutation"),
            sum: self.sum,
            abs_sum: self.abs_sum,
        }
    }
}

/// `<w_π, u>` for every `π`, indexed by lexicographic rank. `n <= 9`.
pub fn all_intersections(w: &Weighting, u: &Weighting) -> Result<Vec<f64>> {
    check_exact(w, u, 9)?;
    let n = w.n();
    if n == 0 {
        return Ok(vec![w.weights()[0] * u.weights()[0]]);
    }
    let parts: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut vals = Vec::new();
            enumerate_branch(w, u, first, &mut |_, v| vals.push(v));
            vals
        })
        .collect();
    Ok(parts.concat())
}

/// Exact `disc⁺`, `disc⁻` and `disc` by enumerating all `n!` permutations.
pub fn disc_exact(w: &Weighting, u: &Weighting) -> Result<DiscrepancyReport> {
    let st = permutation_stats(w, u)?;
    let baseline = expected_intersection(w, u)?;
    Ok(DiscrepancyReport::new(st.max, st.argmax, st.min, st.argmin, baseline, DiscMethod::Exact))
}

/// Exact `E_π |<w_π, u>|`.
pub fn exp_abs_exact(w: &Weighting, u: &Weighting) -> Result<f64> {
    Ok(permutation_stats(w, u)?.mean_abs())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Monte Carlo `E_π |<w_π, u>|`; sample `s` uses `(seed, EXP_ABS_MC, s)`.
pub fn exp_abs_mc(w: &Weighting, u: &Weighting, samples: usize, seed: u64) -> Result<Estimate> {
    w.same_shape(u)?;
    if samples == 0 {
        return Err(Error::input("exp_abs_mc needs at least one sample"));
    }
    let masks = edge_masks(w.n(), w.k());
    let vals: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let pi = Permutation::random(w.n(), &mut stream_rng(seed, streams::EXP_ABS_MC, s));
            intersection_with(&masks, w, u, &pi).abs()
        })
        .collect();
    let (mean, stderr) = mean_stderr(vals.iter().copied());
    Ok(Estimate { mean, stderr, samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Annealing {
    pub initial_temperature: f64,
    pub cooling: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchParams {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Equal-value moves allowed per restart before declaring a local optimum.
    pub plateau_budget: usize,
    pub seed: u64,
    pub annealing: Option<Annealing>,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { restarts: 50, max_sweeps: 1000, plateau_budget: 20, seed: 0, annealing: None }
    }
}

impl SearchParams {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::input("restarts must be at least 1"));
        }
        if let Some(a) = &self.annealing {
            if !(a.cooling > 0.0 && a.cooling < 1.0) {
                return Err(Error::input(format!("cooling factor {} outside (0,1)", a.cooling)));
            }
            if a.initial_temperature.is_nan() || a.initial_temperature < 0.0 {
                return Err(Error::input("initial temperature must be nonnegative"));
            }
        }
        Ok(())
    }
}

/// Limit on stored `(e ∪ a, e ∪ b)` index pairs for the move tables.
pub const MAX_MOVE_TABLE: f64 = 5e7;

/// Move tables: for each vertex pair `(a, b)` the ranks of `e ∪ a` and `e ∪ b`
/// over the (k−1)-sets `e` avoiding both, with the matching `u` differences.
struct Moves {
    pairs: Vec<(usize, usize)>,
    idx: Vec<Vec<(u32, u32)>>,
    du: Vec<Vec<f64>>,
}

impl Moves {
    fn new(u: &Weighting) -> Result<Self> {
        let (n, k) = (u.n(), u.k());
        let size = binomial_f64(n, 2) * if k == 0 { 0.0 } else { binomial_f64(n - 2, k - 1) };
        if size > MAX_MOVE_TABLE {
            return Err(Error::capacity(format!("transposition move table needs {size:.2e} entries")));
        }
        let mut pairs = Vec::new();
        let mut idx = Vec::new();
        let mut du = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let keep: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
                let mut list = Vec::new();
                let mut dl = Vec::new();
                if k >= 1 {
                    for e in KSubsets::new(n - 2, k - 1) {
                        let base = e.iter().fold(0u64, |m, &v| m | (1u64 << keep[v]));
                        let (ra, rb) = (rank_mask(base | 1 << a), rank_mask(base | 1 << b));
                        list.push((ra as u32, rb as u32));
                        dl.push(u.weights()[ra] - u.weights()[rb]);
                    }
                }
                pairs.push((a, b));
                idx.push(list);
                du.push(dl);
            }
        }
        Ok(Moves { pairs, idx, du })
    }

    /// `<w_{(ab)π}, u> − <w_π, u> = −<(w_π)^{ab}, u^{ab}>`.
    #[inline]
    fn gain(&self, m: usize, wp: &[f64], sign: f64) -> f64 {
        let mut d = 0.0;
        for (&(ra, rb), &du) in self.idx[m].iter().zip(&self.du[m]) {
            d += (wp[ra as usize] - wp[rb as usize]) * du;
        }
        -sign * d
    }

    fn apply(&self, m: usize, wp: &mut [f64], images: &mut [usize]) {
        for &(ra, rb) in &self.idx[m] {
            wp.swap(ra as usize, rb as usize);
        }
        let (a, b) = self.pairs[m];
        for v in images.iter_mut() {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
    }
}

/// One local search from a random start, maximizing `sign · <w_π, u>`.
fn climb(w: &Weighting, moves: &Moves, params: &SearchParams, sign: f64, stream_index: u64) -> Permutation {
    let n = w.n();
    let mut rng = stream_rng(params.seed, streams::HEURISTIC, stream_index);
    let start = Permutation::random(n, &mut rng);
    let mut images = start.images().to_vec();
    let mut wp = w.permute(&start).weights().to_vec();
    let scale = w.l1_norm() * moves.du.iter().flatten().fold(0.0f64, |m, d| m.max(d.abs())) + 1e-300;
    let eps = 1e-12 * scale;
    let mut value = 0.0;
    let mut best_value = 0.0;
    let mut best = images.clone();
    let mut plateau = params.plateau_budget;
    let mut gains = vec![0.0; moves.pairs.len()];

    for _ in 0..params.max_sweeps {
        for (m, g) in gains.iter_mut().enumerate() {
            *g = moves.gain(m, &wp, sign);
        }
        let (bm, bg) = gains.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (m, &g)| if g > acc.1 { (m, g) } else { acc });
        if bg > eps {
            moves.apply(bm, &mut wp, &mut images);
            value += bg;
        } else if bg >= -eps && plateau > 0 && !gains.is_empty() {
            let flat: Vec<usize> = (0..gains.len()).filter(|&m| gains[m].abs() <= eps).collect();
            let m = flat[rng.random_range(0..flat.len())];
            moves.apply(m, &mut wp, &mut images);
            plateau -= 1;
        } else {
            break;
        }
        if value > best_value + eps {
            best_value = value;
            best = images.clone();
        }
    }

    if let Some(a) = params.annealing {
        let mut temp = a.initial_temperature;
        images = best.clone();
        wp = w.permute(&Permutation::new(images.clone()).expect("valid")).weights().to_vec();
        value = best_value;
        for _ in 0..a.steps {
            if moves.pairs.is_empty() {
                break;
            }
            let m = rng.random_range(0..moves.pairs.len());
            let g = moves.gain(m, &wp, sign);
            if g >= 0.0 || (temp > 0.0 && rng.random::<f64>() < (g / temp).exp()) {
                moves.apply(m, &mut wp, &mut images);
                value += g;
                if value > best_value + eps {
                    best_value = value;
                    best = images.clone();
                }
            }
            temp *= a.cooling;
        }
    }
    Permutation::new(best).expect("local search keeps a bijection")
}

/// Transposition local search for `max_π` and `min_π` of `<w_π, u>`.
///
/// Reported values are recomputed from the witnesses, so they never exceed
/// the exact optimum.
pub fn disc_heuristic(w: &Weighting, u: &Weighting, params: &SearchParams) -> Result<DiscrepancyReport> {
    w.same_shape(u)?;
    params.validate()?;
    let moves = Moves::new(u)?;
    let masks = edge_masks(w.n(), w.k());
    let results: Vec<((f64, Permutation), (f64, Permutation))> = (0..params.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let hi = climb(w, &moves, params, 1.0, 2 * r);
            let lo = climb(w, &moves, params, -1.0, 2 * r + 1);
            ((intersection_with(&masks, w, u, &hi), hi), (intersection_with(&masks, w, u, &lo), lo))
        })
        .collect();
    let mut it = results.into_iter();
    let (mut best_hi, mut best_lo) = it.next().expect("restarts >= 1");
    for (hi, lo) in it {
        if hi.0 > best_hi.0 {
            best_hi = hi;
        }
        if lo.0 < best_lo.0 {
            best_lo = lo;
        }
    }
    let baseline = expected_intersection(w, u)?;
    Ok(DiscrepancyReport::new(best_hi.0, best_hi.1, best_lo.0, best_lo.1, baseline, DiscMethod::Heuristic))
}

#[derive(Clone, Debug, Serialize)]
pub struct SingleDisc {
    pub disc: f64,
    pub disc_plus: f64,
    pub disc_minus: f64,
    /// Subsets attaining `disc⁺` and `disc⁻`, as sorted 0-indexed vertex lists.
    pub plus_witness: Vec<usize>,
    pub minus_witness: Vec<usize>,
}

/// `max_S ±(w(S) − d(w) C(|S|, k))` over all `S ⊆ V`, by Gray-code enumeration.
pub fn single_disc(w: &Weighting) -> Result<SingleDisc> {
    let (n, k) = (w.n(), w.k());
    if n > MAX_SINGLE_N {
        return Err(Error::capacity(format!("single_disc enumerates 2^{n} subsets; limit is n <= {MAX_SINGLE_N}")));
    }
    let d = w.density();
    // For each v: (mask of e ∖ {v}, w(e)) over edges e containing v.
    let mut through: Vec<Vec<(u64, f64)>> = vec![Vec::new(); n];
    for (&m, &x) in edge_masks(n, k).iter().zip(w.weights()) {
        if x == 0.0 {
            continue;
        }
        let mut bits = m;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            through[v].push((m & !(1u64 << v), x));
            bits &= bits - 1;
        }
    }
    let base = |size: usize| d * binomial(size, k) as f64;
    let empty_value = if k == 0 { w.weights()[0] - base(0) } else { 0.0 };
    let mut ws = if k == 0 { w.weights()[0] } else { 0.0 };
    let (mut s, mut size) = (0u64, 0usize);
    let (mut best_hi, mut hi_mask) = (empty_value, 0u64);
    let (mut best_lo, mut lo_mask) = (empty_value, 0u64);
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let bit = 1u64 << v;
        let delta: f64 = through[v].iter().filter(|(rest, _)| rest & !s == 0).map(|(_, x)| x).sum();
        if s & bit != 0 {
            s &= !bit;
            size -= 1;
            ws -= delta;
        } else {
            s |= bit;
            size += 1;
            ws += delta;
        }
        let val = ws - base(size);
        if val > best_hi {
            best_hi = val;
            hi_mask = s;
        }
        if val < best_lo {
            best_lo = val;
            lo_mask = s;
        }
    }
    let to_vec = |m: u64| (0..n).filter(|&v| m & (1 << v) != 0).collect();
    let (disc_plus, disc_minus) = (best_hi.max(0.0), (-best_lo).max(0.0));
    Ok(SingleDisc {
        disc: disc_plus.max(disc_minus),
        disc_plus,
        disc_minus,
        plus_witness: to_vec(hi_mask),
        minus_witness: to_vec(lo_mask),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::orthoset;
    use crate::permutation::next_lex;

    fn random_int(n: usize, k: usize, seed: u64) -> Weighting {
        let mut rng = stream_rng(seed, 91, 0);
        Weighting::from_fn(n, k, |_| rng.random_range(-3i32..=3) as f64).unwrap()
    }

    fn brute(w: &Weighting, u: &Weighting) -> Vec<f64> {
        let mut p: Vec<usize> = (0..w.n()).collect();
        let mut out = Vec::new();
        loop {
            let wp = w.permute(&Permutation::new(p.clone()).unwrap());
            out.push(wp.inner(u).unwrap());
            if !next_lex(&mut p) {
                break;
            }
        }
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (n, k) in [(5, 2), (6, 3), (6, 1), (4, 0), (6, 6)] {
            let (w, u) = (random_int(n, k, 1), random_int(n, k, 2));
            let b = brute(&w, &u);
            assert_eq!(all_intersections(&w, &u).unwrap(), b);
            let st = permutation_stats(&w, &u).unwrap();
            assert_eq!(st.max, b.iter().cloned().fold(f64::MIN, f64::max));
            assert_eq!(st.min, b.iter().cloned().fold(f64::MAX, f64::min));
            assert_eq!(st.sum, b.iter().sum::<f64>());
            assert_eq!(intersection(&w, &u, &st.argmax).unwrap(), st.max);
            assert_eq!(intersection(&w, &u, &st.argmin).unwrap(), st.min);
        }
    }

    #[test]
    fn mean_is_expected_intersection() {
        let (w, u) = (random_int(7, 3, 3), random_int(7, 3, 4));
        let st = permutation_stats(&w, &u).unwrap();
        assert!((st.mean() - expected_intersection(&w, &u).unwrap()).abs() < 1e-9);
        let ones = Weighting::ones(6, 2).unwrap();
        assert_eq!(expected_intersection(&ones, &ones).unwrap(), 15.0);
    }

    #[test]
    fn trivial_partners() {
        let w = random_int(7, 3, 5);
        let ones = Weighting::ones(7, 3).unwrap();
        let r = disc_exact(&w, &ones).unwrap();
        assert!(r.disc.abs() < 1e-12);
        assert!((exp_abs_exact(&w, &ones).unwrap() - w.total().abs()).abs() < 1e-12);
        let h = disc_heuristic(&w, &ones, &SearchParams { restarts: 2, ..Default::default() }).unwrap();
        assert!(h.disc.abs() < 1e-12);
        assert!(matches!(disc_exact(&Weighting::ones(11, 1).unwrap(), &Weighting::ones(11, 1).unwrap()), Err(Error::Capacity(_))));
    }

    #[test]
    fn orthoset_pairs_have_zero_discrepancy() {
        let set = orthoset(6, 2).unwrap();
        let r = disc_exact(&set[0], &set[1]).unwrap();
        assert_eq!((r.disc_plus, r.disc_minus, r.disc), (0.0, 0.0, 0.0));
    }

    #[test]
    fn symmetry_shift_and_scale() {
        let (w, u) = (random_int(6, 2, 6), random_int(6, 2, 7));
        let a = disc_exact(&w, &u).unwrap();
        let b = disc_exact(&u, &w).unwrap();
        assert_eq!((a.disc_plus, a.disc_minus), (b.disc_plus, b.disc_minus));
        let s = disc_exact(&w.add_constant(3.0), &u).unwrap();
        assert!((s.disc_plus - a.disc_plus).abs() < 1e-9 && (s.disc_minus - a.disc_minus).abs() < 1e-9);
        let t = disc_exact(&w.scale(-2.0), &u).unwrap();
        assert_eq!((t.disc_plus, t.disc_minus), (2.0 * a.disc_minus, 2.0 * a.disc_plus));
        assert!(a.disc_plus >= 0.0 && a.disc_minus >= 0.0);
    }

    #[test]
    fn heuristic_never_beats_exact_and_is_reproducible() {
        let params = SearchParams { restarts: 10, seed: 9, ..Default::default() };
        for seed in 0..5 {
            let (w, u) = (random_int(7, 3, 10 + seed), random_int(7, 3, 20 + seed));
            let e = disc_exact(&w, &u).unwrap();
            let h = disc_heuristic(&w, &u, &params).unwrap();
            assert!(h.max_intersection <= e.max_intersection && h.min_intersection >= e.min_intersection);
            let again = disc_heuristic(&w, &u, &params).unwrap();
            assert_eq!(h.argmax_perm, again.argmax_perm);
            assert_eq!(h.disc, again.disc);
        }
        let bad = SearchParams { annealing: Some(Annealing { initial_temperature: 1.0, cooling: 1.5, steps: 3 }), ..Default::default() };
        assert!(disc_heuristic(&random_int(5, 2, 0), &random_int(5, 2, 1), &bad).is_err());
    }

    #[test]
    fn annealing_runs() {
        let params = SearchParams {
            restarts: 3,
            annealing: Some(Annealing { initial_temperature: 0.5, cooling: 0.99, steps: 500 }),
            ..Default::default()
        };
        let (w, u) = (random_int(8, 3, 1), random_int(8, 3, 2));
        let h = disc_heuristic(&w, &u, &params).unwrap();
        assert_eq!(intersection(&w, &u, &h.argmax_perm).unwrap(), h.max_intersection);
    }

    #[test]
    fn mc_expectation() {
        let (w, u) = (random_int(7, 2, 1), random_int(7, 2, 2));
        let exact = exp_abs_exact(&w, &u).unwrap();
        let est = exp_abs_mc(&w, &u, 20_000, 4).unwrap();
        assert!((est.mean - exact).abs() <= 3.0 * est.stderr);
        let half = exp_abs_mc(&w, &u, 10_000, 4).unwrap();
        let ratio = half.stderr / est.stderr;
        assert!((ratio - 2f64.sqrt()).abs() < 0.1, "stderr ratio {ratio}");
        let c = Weighting::constant(7, 2, 2.0).unwrap();
        assert_eq!(exp_abs_mc(&c, &c, 50, 1).unwrap().stderr, 0.0);
    }

    #[test]
    fn single_disc_matches_clique_pairs() {
        for seed in 0..4 {
            let w = random_int(7, 3, 30 + seed);
            let sd = single_disc(&w).unwrap();
            let (mut plus, mut minus) = (0.0f64, 0.0f64);
            for s in 0..=7 {
                let clique = Weighting::from_fn(7, 3, |e| if e.iter().all(|&v| v < s) { 1.0 } else { 0.0 }).unwrap();
                let r = disc_exact(&w, &clique).unwrap();
                plus = plus.max(r.disc_plus);
                minus = minus.max(r.disc_minus);
            }
            assert!((sd.disc_plus - plus).abs() < 1e-9 && (sd.disc_minus - minus).abs() < 1e-9);
            let hi = w.induced_weight(&sd.plus_witness).unwrap() - w.density() * binomial(sd.plus_witness.len(), 3) as f64;
            assert!((hi.max(0.0) - sd.disc_plus).abs() < 1e-9);
        }
        let ones = single_disc(&Weighting::ones(9, 3).unwrap()).unwrap();
        assert_eq!(ones.disc, 0.0);
    }
}
