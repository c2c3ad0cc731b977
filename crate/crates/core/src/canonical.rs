//! Canonical weightings `φ_i`, the subspaces `V_i` they generate under
//! relabelling, and the orthogonal decomposition of edge-weight space.
//!
//! For a sequence `s_i = (x_1, y_1, ..., x_i, y_i)` of distinct vertices, an
//! edge `A` is compatible with `s_i` when it contains exactly one vertex of
//! every pair; `φ_i(A) = (−1)^{|A ∩ {y_1..y_i}|}` on compatible edges and 0
//! elsewhere. `φ_i* = φ_i / C(n − 2i, k − i)` has ℓ1 norm `2^i`.
//!
//! `(φ_i(s))_π = φ_i(π s)`, so `V_i` is spanned by `φ_i` over all tuples.
//! Swapping `x_j` and `y_j` negates `φ_i` and reordering the pairs leaves it
//! unchanged, so one tuple per pair matching suffices for the span.

use crate::combinatorics::{binomial, binomial_f64, for_each_pair_matching, pair_matching_count, KSubsets};
use crate::error::{Error, Result};
use crate::weighting::{check_dims, dot, Weighting};

/// Ordered pairs `(x_1, y_1), ..., (x_i, y_i)` of distinct vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalSequence {
    pairs: Vec<(usize, usize)>,
}

impl CanonicalSequence {
    /// Builds a sequence from the flat tuple `[x_1, y_1, x_2, y_2, ...]`.
    pub fn new(flat: &[usize], n: usize) -> Result<Self> {
        if flat.len() % 2 != 0 {
            return Err(Error::input(format!("canonical sequence needs an even number of vertices, got {}", flat.len())));
        }
        let mut seen = vec![false; n];
        for &v in flat {
            if v >= n {
                return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
            }
            if seen[v] {
                return Err(Error::input(format!("vertex {v} repeated in canonical sequence")));
            }
            seen[v] = true;
        }
        Ok(CanonicalSequence { pairs: flat.chunks(2).map(|p| (p[0], p[1])).collect() })
    }

    /// The lexicographically smallest sequence `(0, 1, 2, 3, ..., 2i − 1)`.
    pub fn standard(i: usize) -> Self {
        CanonicalSequence { pairs: (0..i).map(|j| (2 * j, 2 * j + 1)).collect() }
    }

    pub fn level(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn flat(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(x, y)| [x, y]).collect()
    }

    /// The sequence with `x_j` and `y_j` exchanged.
    pub fn flipped(&self, j: usize) -> Self {
        let mut pairs = self.pairs.clone();
        pairs[j] = (pairs[j].1, pairs[j].0);
        CanonicalSequence { pairs }
    }
}

fn check_level(n: usize, k: usize, seq: &CanonicalSequence) -> Result<()> {
    let i = seq.level();
    if i > k {
        return Err(Error::input(format!("level i = {i} exceeds k = {k}")));
    }
    if 2 * i > n {
        return Err(Error::input(format!("level i = {i} needs 2i <= n = {n}")));
    }
    if let Some(&v) = seq.flat().iter().find(|&&v| v >= n) {
        return Err(Error::input(format!("vertex {v} out of range for n = {n}")));
    }
    Ok(())
}

/// `φ_i` for the sequence `seq` (level `i = seq.level()`).
pub fn phi(n: usize, k: usize, seq: &CanonicalSequence) -> Result<Weighting> {
    check_dims(n, k)?;
    check_level(n, k, seq)?;
    Weighting::from_fn(n, k, |edge| {
        let mut sign = 1.0;
        for &(x, y) in seq.pairs() {
            let hx = edge.binary_search(&x).is_ok();
            let hy = edge.binary_search(&y).is_ok();
            if hx == hy {
                return 0.0;
            }
            if hy {
                sign = -sign;
            }
        }
        sign
    })
}

/// `φ_i* = φ_i / C(n − 2i, k − i)`.
pub fn phi_star(n: usize, k: usize, seq: &CanonicalSequence) -> Result<Weighting> {
    let i = seq.level();
    let w = phi(n, k, seq)?;
    Ok(w.scale(1.0 / binomial_f64(n - 2 * i, k - i)))
}

/// `<w, φ_i(t)>` for the flat tuple `t` of `2i` distinct vertices, without
/// materializing `φ_i`.
///
/// The signed sum over the `2^i` compatible choices is taken as a sum of
/// differences `w(.. ∪ x_i) − w(.. ∪ y_i)`, so a constant `w` gives exactly 0.
pub fn phi_inner(w: &Weighting, tuple: &[usize]) -> f64 {
    let (n, k) = (w.n(), w.k());
    let i = tuple.len() / 2;
    debug_assert!(i <= k && 2 * i <= n);
    let used = tuple.iter().fold(0u64, |m, &v| m | (1u64 << v));
    let rest: Vec<usize> = (0..n).filter(|v| used & (1u64 << v) == 0).collect();
    if i == 0 {
        return w.total();
    }
    let (xl, yl) = (1u64 << tuple[2 * i - 2], 1u64 << tuple[2 * i - 1]);
    let mut acc = 0.0;
    for b in KSubsets::new(rest.len(), k - i) {
        let base = b.iter().fold(0u64, |m, &j| m | (1u64 << rest[j]));
        for choice in 0u32..(1u32 << (i - 1)) {
            let mut mask = base;
            for j in 0..i - 1 {
                let v = if choice & (1 << j) != 0 { tuple[2 * j + 1] } else { tuple[2 * j] };
                mask |= 1u64 << v;
            }
            let term = w.get_mask(mask | xl) - w.get_mask(mask | yl);
            if choice.count_ones() % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
    }
    acc
}

/// Orthonormal basis of `V_i`, with the spanning set it was built from.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    pub n: usize,
    pub k: usize,
    pub level: usize,
    /// One `φ_i` per pair matching; every other tuple gives `±` one of these.
    pub spanning: Vec<Weighting>,
    pub basis: Vec<Weighting>,
}

/// Pivot threshold for Gram–Schmidt, relative to the largest spanning norm.
pub const PIVOT_TOLERANCE: f64 = 1e-9;

/// Upper bound on `C(n, k)` for basis construction (dense `C(n,k)²` storage).
pub const MAX_BASIS_EDGES: u64 = 4_000;
/// Upper bound on spanning-vector count times edge count.
pub const MAX_SPANNING_WORK: f64 = 2e8;

impl SubspaceBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection `Σ_b <w, b> b` onto `V_i`.
    pub fn project(&self, w: &Weighting) -> Result<Weighting> {
        let mut out = vec![0.0; w.num_edges()];
        w.same_shape(&self.basis.first().cloned().unwrap_or(Weighting::zeros(self.n, self.k)?))?;
        for b in &self.basis {
            let c = dot(w.weights(), b.weights());
            for (o, bv) in out.iter_mut().zip(b.weights()) {
                *o += c * bv;
            }
        }
        Weighting::from_weights(self.n, self.k, out)
    }

    /// Largest `|<w − P w, b>|` over the basis, a direct check of the projection.
    pub fn orthogonality_defect(&self, w: &Weighting, projected: &Weighting) -> f64 {
        let r = w - projected;
        self.basis.iter().map(|b| dot(r.weights(), b.weights()).abs()).fold(0.0, f64::max)
    }
}

fn check_basis_capacity(n: usize, k: usize, i: usize) -> Result<()> {
    check_dims(n, k)?;
    if i > k || 2 * k > n {
        return Err(Error::input(format!("subspace V_{i} needs i <= k <= n/2, got n = {n}, k = {k}")));
    }
    let m = binomial(n, k);
    if m > MAX_BASIS_EDGES {
        return Err(Error::capacity(format!("C({n},{k}) = {m} exceeds the basis limit {MAX_BASIS_EDGES}")));
    }
    let work = pair_matching_count(n, i) * m as f64;
    if work > MAX_SPANNING_WORK {
        return Err(Error::capacity(format!("spanning set for V_{i} at (n,k) = ({n},{k}) needs {work:.3e} entries")));
    }
    Ok(())
}

/// Spans `V_i` and orthonormalizes with modified Gram–Schmidt (two passes).
pub fn subspace_basis(n: usize, k: usize, i: usize) -> Result<SubspaceBasis> {
    check_basis_capacity(n, k, i)?;
    let mut spanning = Vec::new();
    let mut err = None;
    for_each_pair_matching(n, i, |t| match CanonicalSequence::new(t, n).and_then(|s| phi(n, k, &s)) {
        Ok(w) => spanning.push(w),
        Err(e) => err = Some(e),
    });
    if let Some(e) = err {
        return Err(e);
    }
    let max_norm = spanning.iter().map(Weighting::l2_norm).fold(0.0, f64::max);
    let threshold = PIVOT_TOLERANCE * max_norm;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let m = binomial(n, k) as usize;
    for s in &spanning {
        if basis.len() == m {
            break;
        }
        let mut v = s.weights().to_vec();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > threshold {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    let basis = basis
        .into_iter()
        .map(|b| Weighting::from_weights(n, k, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(SubspaceBasis { n, k, level: i, spanning, basis })
}

/// The `V_i` component of `w`.
pub fn project(w: &Weighting, i: usize) -> Result<Weighting> {
    subspace_basis(w.n(), w.k(), i)?.project(w)
}

/// Components `u_0, ..., u_k` with `u_i ∈ V_i` and the ℓ1 reconstruction residual.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub components: Vec<Weighting>,
    pub residual: f64,
}

/// Bases for every level at a fixed `(n, k)`, reusable across decompositions.
#[derive(Clone, Debug)]
pub struct Decomposer {
    bases: Vec<SubspaceBasis>,
}

impl Decomposer {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let bases = (0..=k).map(|i| subspace_basis(n, k, i)).collect::<Result<Vec<_>>>()?;
        Ok(Decomposer { bases })
    }

    pub fn bases(&self) -> &[SubspaceBasis] {
        &self.bases
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(SubspaceBasis::rank).collect()
    }

    pub fn decompose(&self, w: &Weighting) -> Result<Decomposition> {
        let components = self.bases.iter().map(|b| b.project(w)).collect::<Result<Vec<_>>>()?;
        let mut rebuilt = Weighting::zeros(w.n(), w.k())?;
        for c in &components {
            rebuilt = &rebuilt + c;
        }
        let residual = (w - &rebuilt).l1_norm();
        Ok(Decomposition { components, residual })
    }
}

/// Decomposes `w` into its `V_0 ⊕ ... ⊕ V_k` components.
pub fn full_decompose(w: &Weighting) -> Result<Decomposition> {
    Decomposer::new(w.n(), w.k())?.decompose(w)
}

/// `k` weightings `w_1, ..., w_k` with `w_i ∈ V_i`, `w_i(V) = 0` and
/// `‖w_i‖_1 = C(n, k)`, pairwise of discrepancy zero.
pub fn orthoset(n: usize, k: usize) -> Result<Vec<Weighting>> {
    check_dims(n, k)?;
    if n < 2 * k {
        return Err(Error::input(format!("orthoset needs n >= 2k, got n = {n}, k = {k}")));
    }
    let edges = binomial_f64(n, k);
    (1..=k)
        .map(|i| {
            let p = phi(n, k, &CanonicalSequence::standard(i))?;
            let norm = 2f64.powi(i as i32) * binomial_f64(n - 2 * i, k - i);
            Ok(p.scale(edges / norm))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ordered_tuples;
    use crate::permutation::Permutation;
    use crate::rng::stream_rng;
    use rand::Rng;

    #[test]
    fn phi_zero_is_all_ones() {
        let p = phi(7, 3, &CanonicalSequence::standard(0)).unwrap();
        assert_eq!(p, Weighting::ones(7, 3).unwrap());
        let ps = phi_star(7, 3, &CanonicalSequence::standard(0)).unwrap();
        assert!(ps.weights().iter().all(|&v| (v - 1.0 / 35.0).abs() < 1e-15));
    }

    #[test]
    fn phi_one_on_four_vertices() {
        let p = phi(4, 2, &CanonicalSequence::new(&[0, 1], 4).unwrap()).unwrap();
        assert_eq!(p.get(&[0, 2]), 1.0);
        assert_eq!(p.get(&[0, 3]), 1.0);
        assert_eq!(p.get(&[1, 2]), -1.0);
        assert_eq!(p.get(&[1, 3]), -1.0);
        assert_eq!(p.get(&[0, 1]), 0.0);
        assert_eq!(p.get(&[2, 3]), 0.0);
        assert_eq!(p.inner(&p).unwrap(), 4.0);
    }

    #[test]
    fn support_sizes_and_norms() {
        let p = phi(8, 3, &CanonicalSequence::standard(2)).unwrap();
        assert_eq!(p.support().len(), 16);
        assert_eq!(p.l1_norm(), 16.0);
        assert!(p.weights().iter().all(|&v| v == 0.0 || v.abs() == 1.0));
        for (n, k) in [(6, 2), (7, 3), (8, 3), (9, 4), (10, 2)] {
            for i in 0..=k {
                let s = phi_star(n, k, &CanonicalSequence::standard(i)).unwrap();
                assert!((s.l1_norm() - 2f64.powi(i as i32)).abs() < 1e-12);
                if i >= 1 {
                    assert_eq!(phi(n, k, &CanonicalSequence::standard(i)).unwrap().density(), 0.0);
                }
            }
        }
        let s = phi_star(6, 3, &CanonicalSequence::standard(1)).unwrap();
        assert!(s.weights().iter().all(|&v| v == 0.0 || (v.abs() - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn bad_sequences_rejected() {
        assert!(CanonicalSequence::new(&[0, 1, 2], 6).is_err());
        assert!(CanonicalSequence::new(&[0, 1, 1, 2], 6).is_err());
        assert!(CanonicalSequence::new(&[0, 6], 6).is_err());
        assert!(phi(6, 2, &CanonicalSequence::standard(3)).is_err());
    }

    #[test]
    fn flipping_a_pair_negates() {
        let s = CanonicalSequence::new(&[3, 0, 5, 2, 1, 6], 8).unwrap();
        let p = phi(8, 3, &s).unwrap();
        for j in 0..3 {
            assert_eq!(phi(8, 3, &s.flipped(j)).unwrap(), p.scale(-1.0));
        }
    }

    #[test]
    fn phi_inner_matches_materialized() {
        let mut rng = stream_rng(11, 0, 0);
        let w = Weighting::from_fn(8, 3, |_| rng.random_range(-3i32..=3) as f64).unwrap();
        for i in 0..=3 {
            for t in ordered_tuples(8, 2 * i).into_iter().step_by(37) {
                let p = phi(8, 3, &CanonicalSequence::new(&t, 8).unwrap()).unwrap();
                assert_eq!(phi_inner(&w, &t), w.inner(&p).unwrap());
            }
        }
    }

    #[test]
    fn relabelling_moves_the_tuple() {
        let s = CanonicalSequence::new(&[0, 3, 4, 1], 7).unwrap();
        let pi = Permutation::new(vec![6, 2, 0, 5, 1, 3, 4]).unwrap();
        let moved: Vec<usize> = s.flat().iter().map(|&v| pi.apply(v)).collect();
        let lhs = phi(7, 3, &s).unwrap().permute(&pi);
        let rhs = phi(7, 3, &CanonicalSequence::new(&moved, 7).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ranks_sum_to_edge_count() {
        for (n, k, expected) in [(6, 2, vec![1, 5, 9]), (7, 3, vec![1, 6, 14, 14])] {
            let d = Decomposer::new(n, k).unwrap();
            assert_eq!(d.ranks(), expected);
            assert_eq!(d.ranks().iter().sum::<usize>() as u64, binomial(n, k));
        }
    }

    #[test]
    fn projection_properties() {
        let mut rng = stream_rng(12, 0, 0);
        let w = Weighting::from_fn(6, 2, |_| rng.random_range(-1.0..1.0)).unwrap();
        let d = Decomposer::new(6, 2).unwrap();
        for (i, b) in d.bases().iter().enumerate() {
            let p = b.project(&w).unwrap();
            assert!(b.orthogonality_defect(&w, &p) < 1e-12);
            assert!(b.project(&p).unwrap().max_abs_diff(&p) < 1e-12);
            for j in 0..=2 {
                let pj = phi(6, 2, &CanonicalSequence::standard(j)).unwrap();
                let proj = b.project(&pj).unwrap();
                if i == j {
                    assert!(proj.max_abs_diff(&pj) < 1e-9);
                } else {
                    assert!(proj.weights().iter().all(|v| v.abs() < 1e-9));
                }
            }
        }
        let dec = d.decompose(&w).unwrap();
        assert!(dec.residual < 1e-9 * w.l1_norm());
        let (w0, _) = w.split_constant();
        assert!(dec.components[0].max_abs_diff(&w0) < 1e-12);
        let ones = d.decompose(&Weighting::ones(6, 2).unwrap()).unwrap();
        assert!(ones.components[1..].iter().all(|c| c.weights().iter().all(|v| v.abs() < 1e-12)));
    }

    #[test]
    fn sampled_relabellings_lie_in_span() {
        let b = subspace_basis(7, 3, 2).unwrap();
        let base = phi(7, 3, &CanonicalSequence::standard(2)).unwrap();
        for s in 0..20 {
            let pi = Permutation::random(7, &mut stream_rng(13, 0, s));
            let v = base.permute(&pi);
            let p = b.project(&v).unwrap();
            assert!((&v - &p).l1_norm() < 1e-9);
        }
    }

    #[test]
    fn orthoset_members() {
        assert!(orthoset(5, 3).is_err());
        for (n, k) in [(6, 2), (8, 3)] {
            let set = orthoset(n, k).unwrap();
            assert_eq!(set.len(), k);
            let edges = binomial(n, k) as f64;
            for w in &set {
                assert_eq!(w.total(), 0.0);
                assert!((w.l1_norm() - edges).abs() <= 1e-12 * edges);
            }
        }
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(subspace_basis(20, 6, 2), Err(Error::Capacity(_))));
        assert!(matches!(subspace_basis(6, 4, 1), Err(Error::Input(_))));
    }
}
