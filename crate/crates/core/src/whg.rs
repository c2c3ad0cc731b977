//! The `.whg` text format.
//!
//! ```text
//! # comment
//! n k
//! v_1 v_2 ... v_k weight
//! ```
//!
//! Vertices are 1-indexed and strictly increasing, unlisted edges weigh 0,
//! and `#` starts a comment anywhere on a line. Writers emit the nonzero
//! edges in colex order using the shortest round-trip decimal form, so
//! write-then-parse reproduces every weight bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::combinatorics::{rank_sorted, KSubsets};
use crate::error::{Error, Result};
use crate::weighting::{check_dims, Weighting};

pub fn parse_weighting(text: &str) -> Result<Weighting> {
    let mut header: Option<(usize, usize)> = None;
    let mut weights: Vec<f64> = Vec::new();
    let mut seen: Vec<Option<usize>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line: line_no, msg };

        let Some((n, k)) = header else {
            if fields.len() != 2 {
                return Err(err(format!("expected header \"n k\", found {content:?}")));
            }
            let n: usize = fields[0].parse().map_err(|_| err(format!("bad vertex count {:?}", fields[0])))?;
            let k: usize = fields[1].parse().map_err(|_| err(format!("bad uniformity {:?}", fields[1])))?;
            let m = check_dims(n, k).map_err(|e| err(e.to_string()))?;
            weights = vec![0.0; m];
            seen = vec![None; m];
            header = Some((n, k));
            continue;
        };

        if fields.len() != k + 1 {
            return Err(err(format!("expected {k} vertices and a weight, found {} fields", fields.len())));
        }
        let mut edge = Vec::with_capacity(k);
        for f in &fields[..k] {
            let v: usize = f.parse().map_err(|_| err(format!("bad vertex {f:?}")))?;
            if v == 0 || v > n {
                return Err(err(format!("vertex {v} outside 1..={n}")));
            }
            edge.push(v - 1);
        }
        if edge.windows(2).any(|p| p[0] >= p[1]) {
            return Err(err("edge vertices must be strictly increasing".into()));
        }
        let weight = parse_weight(fields[k]).ok_or_else(|| err(format!("bad weight {:?}", fields[k])))?;
        let r = rank_sorted(&edge);
        if let Some(first) = seen[r] {
            return Err(err(format!("duplicate edge (first given on line {first})")));
        }
        seen[r] = Some(line_no);
        weights[r] = weight;
    }

    let (n, k) = header.ok_or(Error::Parse { line: 0, msg: "missing \"n k\" header".into() })?;
    Weighting::from_weights(n, k, weights)
}

fn parse_weight(s: &str) -> Option<f64> {
    let normalized = s.replace('\u{2212}', "-");
    normalized.parse::<f64>().ok().filter(|w| w.is_finite())
}

pub fn read_weighting(path: impl AsRef<Path>) -> Result<Weighting> {
    let text = fs::read_to_string(path.as_ref())?;
    parse_weighting(&text)
}

pub fn format_weighting(w: &Weighting) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", w.n(), w.k());
    for (e, &weight) in KSubsets::new(w.n(), w.k()).zip(w.weights()) {
        if weight == 0.0 {
            continue;
        }
        for v in &e {
            let _ = write!(out, "{} ", v + 1);
        }
        let _ = writeln!(out, "{weight}");
    }
    out
}

pub fn write_weighting(path: impl AsRef<Path>, w: &Weighting) -> Result<()> {
    fs::write(path, format_weighting(w))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn parses_small_file() {
        let w = parse_weighting("3 2\n1 2 1.0\n1 3 \u{2212}0.5\n").unwrap();
        assert_eq!((w.n(), w.k()), (3, 2));
        assert_eq!(w.get(&[0, 1]), 1.0);
        assert_eq!(w.get(&[0, 2]), -0.5);
        assert_eq!(w.get(&[1, 2]), 0.0);
        assert_eq!(w.support().len(), 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let w = parse_weighting("# header next\n\n4 1 # four vertices\n2 3.5\n# done\n").unwrap();
        assert_eq!(w.weights(), &[0.0, 3.5, 0.0, 0.0]);
    }

    #[test]
    fn duplicate_edge_names_the_line() {
        let err = parse_weighting("3 2\n1 2 1\n2 3 1\n1 2 4\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("duplicate"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_weighting("3 2\n1 4 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weighting("3 2\n2 1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weighting("3 2\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weighting("3 2\n1 2 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weighting("3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_weighting("# only comments\n"), Err(Error::Parse { line: 0, .. })));
    }

    proptest! {
        #[test]
        fn write_then_parse_is_bit_exact(seed in 0u64..500, n in 3usize..9, k in 0usize..4) {
            prop_assume!(k <= n);
            let mut rng = stream_rng(seed, 0, 0);
            let w = Weighting::from_fn(n, k, |_| {
                if rng.random_bool(0.3) { 0.0 } else { rng.random_range(-1e3..1e3) }
            }).unwrap();
            let back = parse_weighting(&format_weighting(&w)).unwrap();
            let same = w.weights().iter().zip(back.weights()).all(|(a, b)| a.to_bits() == b.to_bits() || (*a == 0.0 && *b == 0.0));
            prop_assert!(same);
        }
    }
}
