use hyperdisc::canonical::Decomposer;
use hyperdisc::discrepancy::{disc_exact, expected_intersection, intersection};
use hyperdisc::whg::{format_weighting, parse_weighting};
use hyperdisc::wvector::{wvector_canonical, wvector_recursive};
use hyperdisc::{Permutation, Weighting};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn weighting(n: usize, k: usize) -> impl Strategy<Value = Weighting> {
    let m = hyperdisc::binomial(n, k) as usize;
    prop::collection::vec(-4i32..=4, m).prop_map(move |v| Weighting::from_weights(n, k, v.into_iter().map(f64::from).collect()).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn whg_round_trip(w in weighting(7, 3)) {
        let back = parse_weighting(&format_weighting(&w)).unwrap();
        prop_assert_eq!(back.weights(), w.weights());
    }

    #[test]
    fn permutation_action_composes(w in weighting(6, 3), p in permutation(6), q in permutation(6)) {
        let lhs = w.permute(&q).permute(&p);
        let rhs = w.permute(&p.compose(&q));
        prop_assert!(lhs.max_abs_diff(&rhs) < TOL);
    }

    #[test]
    fn decomposition_reconstructs(w in weighting(7, 3)) {
        let dec = Decomposer::new(7, 3).unwrap().decompose(&w).unwrap();
        let mut sum = Weighting::zeros(7, 3).unwrap();
        for c in &dec.components {
            sum = sum.axpy(1.0, c).unwrap();
        }
        prop_assert!(sum.max_abs_diff(&w) < TOL);
        for (i, a) in dec.components.iter().enumerate() {
            for b in &dec.components[i + 1..] {
                prop_assert!(a.inner(b).unwrap().abs() < TOL);
            }
        }
    }

    #[test]
    fn wvector_definitions_agree(w in weighting(7, 3)) {
        let (r, c) = (wvector_recursive(&w).unwrap(), wvector_canonical(&w).unwrap());
        for (a, b) in r.values.iter().zip(&c.values) {
            prop_assert!((a - b).abs() <= TOL * (1.0 + a.abs()));
        }
    }

    #[test]
    fn disc_brackets_the_mean(w in weighting(6, 2), u in weighting(6, 2), p in permutation(6)) {
        let r = disc_exact(&w, &u).unwrap();
        let mean = expected_intersection(&w, &u).unwrap();
        let x = intersection(&w, &u, &p).unwrap();
        prop_assert!(x <= r.max_intersection + TOL && x >= r.min_intersection - TOL);
        prop_assert!((r.disc - r.disc_plus.max(r.disc_minus)).abs() < TOL);
        prop_assert!(r.min_intersection <= mean + TOL && mean <= r.max_intersection + TOL);
    }
}
