//! Discrepancy of pairs of weighted k-uniform hypergraphs.
//!
//! A [`Weighting`] assigns a real weight to every k-subset of `0..n`. For a
//! pair `(w, u)` the intersection `<w_π, u>` averages `d(w) d(u) C(n,k)` over
//! relabellings `π`; the discrepancy is the largest deviation from that mean.
//! The crate computes it exactly (small `n`) or heuristically, along with the
//! W-vector invariants, the canonical weightings `φ_i`, the orthogonal
//! decomposition of edge-weight space into the subspaces `V_i`, the
//! transposition statistics `δ`, `Δ` and `γ`, and the Steiner-triple-system
//! constructions with discrepancy zero.

pub mod canonical;
pub mod combinatorics;
pub mod constructions;
pub mod discrepancy;
pub mod error;
pub mod permutation;
pub mod rng;
pub mod transpositions;
pub mod verify;
pub mod weighting;
pub mod whg;
pub mod wvector;

pub use canonical::{full_decompose, orthoset, phi, phi_star, project, subspace_basis, CanonicalSequence, Decomposer, Decomposition, SubspaceBasis};
pub use combinatorics::{binomial, rank_kset, unrank_kset, KSet};
pub use constructions::{crosscut, random_hypergraph, scaled_phi_family, sts, zero_disc_pair, SteinerSystem};
pub use discrepancy::{disc_exact, disc_heuristic, exp_abs_exact, exp_abs_mc, expected_intersection, single_disc, DiscrepancyReport, SearchParams};
pub use error::{Error, Result};
pub use permutation::Permutation;
pub use transpositions::{gamma_exact, gamma_mc, poly_coeffs, PolyCoeffs, TranspositionFamily};
pub use verify::{run_verify, Scale, VerifyReport};
pub use weighting::Weighting;
pub use whg::{format_weighting, parse_weighting, read_weighting, write_weighting};
pub use wvector::{wvector_canonical, wvector_mc, wvector_recursive, WVector};
