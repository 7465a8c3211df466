//! Plain-text point-set format.
//!
//! ```text
//! # comment
//! dim 2
//! 0 0
//! 1 0
//! ```
//! Points are written back in canonical order, so a parse/write round trip is stable.

use std::fmt::Write as _;

use super::PointSet;
use crate::error::{Error, Result};

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let mut dim: Option<usize> = None;
    let mut coords = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        match dim {
            None => {
                let mut words = line.split_whitespace();
                if words.next() != Some("dim") {
                    return Err(parse_err(format!("expected header 'dim k', got '{line}'")));
                }
                let k: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .filter(|&k| k > 0)
                    .ok_or_else(|| parse_err("dimension must be a positive integer".into()))?;
                if words.next().is_some() {
                    return Err(parse_err("trailing tokens after dimension".into()));
                }
                dim = Some(k);
            }
            Some(k) => {
                let before = coords.len();
                for w in line.split_whitespace() {
                    coords.push(w.parse::<i64>().map_err(|e| parse_err(format!("bad coordinate '{w}': {e}")))?);
                }
                if coords.len() - before != k {
                    return Err(parse_err(format!("expected {k} coordinates, got {}", coords.len() - before)));
                }
            }
        }
    }
    let dim = dim.ok_or(Error::Parse { line: 0, msg: "missing 'dim k' header".into() })?;
    PointSet::from_flat(dim, coords)
}

pub fn point_set_to_text(set: &PointSet) -> String {
    let mut out = format!("dim {}\n", set.dim());
    for p in set.iter() {
        let line: Vec<String> = p.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments() {
        let text = "# triangle\ndim 2\n0 1  # apex\n\n1 0\n0 0\n0 0\n";
        let set = parse_point_set(text).unwrap();
        assert_eq!(set.to_vecs(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(point_set_to_text(&set), "dim 2\n0 0\n0 1\n1 0\n");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_point_set("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_point_set("dim 2\n1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_point_set("dim 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_point_set("dim 1\nx\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_point_set("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_body_is_allowed() {
        let set = parse_point_set("dim 3\n").unwrap();
        assert!(set.is_empty());
        assert_eq!(set.dim(), 3);
    }
}
