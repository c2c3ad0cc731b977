//! Browser demo bindings. Every export returns a JSON string; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use hyperdisc::canonical::Decomposer;
use hyperdisc::constructions::{crosscut, random_hypergraph, scaled_phi_family, sts};
use hyperdisc::discrepancy::{all_intersections, expected_intersection};
use hyperdisc::verify::random_wvector_means;
use hyperdisc::{Result, Weighting};

const MAX_DEMO_N: usize = 9;
const MAX_SCALING_N: usize = 24;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn demo_pair(kind: &str, n: usize, seed: u64) -> Result<(Weighting, Weighting)> {
    match kind {
        "sts-crosscut" => {
            let a: Vec<usize> = (0..n / 2).collect();
            Ok((sts(n)?, crosscut(n, &a)?))
        }
        "orthoset" => {
            let mut f = scaled_phi_family(n, 3)?;
            let u = f.swap_remove(1);
            Ok((f.swap_remove(0), u))
        }
        "random" => Ok((random_hypergraph(n, 3, 0.5, seed)?, random_hypergraph(n, 3, 0.5, seed.wrapping_add(1))?)),
        "sts-random" => Ok((sts(n)?, random_hypergraph(n, 3, 0.5, seed)?)),
        other => Err(hyperdisc::Error::Input(format!("unknown construction {other:?}"))),
    }
}

pub fn intersection_histogram_value(kind: &str, n: usize, bins: usize, seed: u64) -> Result<Value> {
    if n > MAX_DEMO_N {
        return Err(hyperdisc::Error::Capacity(format!("the demo enumerates all n! permutations; n = {n} exceeds {MAX_DEMO_N}")));
    }
    let (w, u) = demo_pair(kind, n, seed)?;
    let vals = all_intersections(&w, &u)?;
    let mean = expected_intersection(&w, &u)?;
    let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let bins = bins.clamp(1, 200);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in &vals {
        let b = if width > 1e-12 { (((v - lo) / width) as usize).min(bins - 1) } else { 0 };
        counts[b] += 1;
    }
    Ok(json!({
        "construction": kind,
        "n": n,
        "permutations": vals.len(),
        "min": lo,
        "max": hi,
        "mean": mean,
        "disc_plus": hi - mean,
        "disc_minus": mean - lo,
        "bin_width": width,
        "counts": counts,
    }))
}

pub fn wvector_scaling_value(k: usize, p: f64, n_min: usize, n_max: usize, samples: usize, seed: u64) -> Result<Value> {
    if n_max > MAX_SCALING_N || n_min < 2 * k || n_min > n_max {
        return Err(hyperdisc::Error::Input(format!("need {} ≤ n_min ≤ n_max ≤ {MAX_SCALING_N}", 2 * k)));
    }
    let rows = (n_min..=n_max)
        .map(|n| Ok(json!({ "n": n, "W": random_wvector_means(n, k, p, samples.max(1), seed)? })))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({ "k": k, "p": p, "samples": samples, "rows": rows }))
}

pub fn decomposition_energy_value(kind: &str, n: usize, k: usize, seed: u64) -> Result<Value> {
    let w = match kind {
        "random" => random_hypergraph(n, k, 0.5, seed)?,
        "sts" if k == 3 => sts(n)?,
        "crosscut" if k == 3 => crosscut(n, &(0..n / 2).collect::<Vec<_>>())?,
        other => return Err(hyperdisc::Error::Input(format!("unknown weighting {other:?} for k = {k}"))),
    };
    let dec = Decomposer::new(n, k)?.decompose(&w)?;
    let total = w.l2_norm().powi(2);
    let energy: Vec<f64> = dec.components.iter().map(|c| c.l2_norm().powi(2)).collect();
    let share: Vec<f64> = energy.iter().map(|e| if total > 0.0 { e / total } else { 0.0 }).collect();
    Ok(json!({ "weighting": kind, "n": n, "k": k, "energy": energy, "share": share, "residual": dec.residual }))
}

/// Histogram of ⟨w_π, u⟩ over all permutations of a demo pair.
#[wasm_bindgen]
pub fn intersection_histogram(kind: &str, n: usize, bins: usize, seed: u32) -> String {
    respond(intersection_histogram_value(kind, n, bins, seed.into()))
}

/// Mean W-vector of random hypergraphs for each n in a range.
#[wasm_bindgen]
pub fn wvector_scaling(k: usize, p: f64, n_min: usize, n_max: usize, samples: usize, seed: u32) -> String {
    respond(wvector_scaling_value(k, p, n_min, n_max, samples, seed.into()))
}

/// Squared norm of each V_i component.
#[wasm_bindgen]
pub fn decomposition_energy(kind: &str, n: usize, k: usize, seed: u32) -> String {
    respond(decomposition_energy_value(kind, n, k, seed.into()))
}
