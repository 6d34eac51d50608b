//! Text loaders for the interaction and KG file formats.
//!
//! Interaction files: one line per user, `user_id item_id item_id ...`,
//! whitespace-separated non-negative integers. KG files: one triplet per
//! line, `head relation tail`. UTF-8, LF or CRLF.

use std::collections::HashSet;
use std::path::Path;

use crate::data::graphs::{Pair, Triplet};
use crate::error::{Error, Result};

fn parse_id(token: &str, path: &Path, line_no: usize) -> Result<usize> {
    let v: i64 = token.parse().map_err(|_| Error::Parse {
        path: path.display().to_string(),
        line: line_no,
        msg: format!("non-integer token {token:?}"),
    })?;
    if v < 0 {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: line_no,
            msg: format!("negative id {v}"),
        });
    }
    Ok(v as usize)
}

/// Loads `(user, item)` pairs. Duplicate pairs are dropped (first occurrence
/// wins); lines with a bare user id yield no pairs.
pub fn load_interactions(path: &Path) -> Result<Vec<Pair>> {
    let content = std::fs::read_to_string(path)?;
    parse_interactions(&content, path)
}

pub fn parse_interactions(content: &str, path: &Path) -> Result<Vec<Pair>> {
    let mut pairs = Vec::new();
    let mut seen: HashSet<Pair> = HashSet::new();
    for (line_no, line) in content.lines().enumerate() {
        let line_no = line_no + 1;
        let mut tokens = line.split_whitespace();
        let Some(user_tok) = tokens.next() else {
            continue;
        };
        let user = parse_id(user_tok, path, line_no)?;
        for tok in tokens {
            let item = parse_id(tok, path, line_no)?;
            if seen.insert((user, item)) {
                pairs.push((user, item));
            }
        }
    }
    Ok(pairs)
}

/// Loads `(head, relation, tail)` triplets in file order, without
/// duplicates.
pub fn load_kg(path: &Path) -> Result<Vec<Triplet>> {
    let content = std::fs::read_to_string(path)?;
    parse_kg(&content, path)
}

pub fn parse_kg(content: &str, path: &Path) -> Result<Vec<Triplet>> {
    let mut triplets = Vec::new();
    let mut seen: HashSet<Triplet> = HashSet::new();
    for (line_no, line) in content.lines().enumerate() {
        let line_no = line_no + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 3 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: line_no,
                msg: format!("expected `head relation tail`, found {} tokens", tokens.len()),
            });
        }
        let h = parse_id(tokens[0], path, line_no)?;
        let r = parse_id(tokens[1], path, line_no)?;
        let t = parse_id(tokens[2], path, line_no)?;
        if seen.insert((h, r, t)) {
            triplets.push((h, r, t));
        }
    }
    Ok(triplets)
}

/// Loads one canonical relation id per line (`hier_relations.txt`).
pub fn load_relation_ids(path: &Path) -> Result<Vec<usize>> {
    let content = std::fs::read_to_string(path)?;
    let mut ids = Vec::new();
    for (line_no, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        ids.push(parse_id(line, path, line_no + 1)?);
    }
    Ok(ids)
}

/// Appends the inverse direction `(t, r + num_canonical, h)` for every
/// canonical triplet, then removes exact duplicates.
pub fn add_inverse_relations(
    triplets: &[Triplet],
    num_canonical: usize,
) -> Result<Vec<Triplet>> {
    for &(_, r, _) in triplets {
        if r >= num_canonical {
            return Err(Error::contract(format!(
                "relation id {r} not below canonical count {num_canonical}"
            )));
        }
    }
    let mut out = Vec::with_capacity(triplets.len() * 2);
    let mut seen: HashSet<Triplet> = HashSet::with_capacity(triplets.len() * 2);
    for &t in triplets {
        if seen.insert(t) {
            out.push(t);
        }
    }
    for &(h, r, t) in triplets {
        let inv = (t, r + num_canonical, h);
        if seen.insert(inv) {
            out.push(inv);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn p() -> PathBuf {
        PathBuf::from("test.txt")
    }

    #[test]
    fn interactions_basic_and_dedup() {
        let pairs = parse_interactions("0 5 7\n3\n0 5 5\n", &p()).unwrap();
        assert_eq!(pairs, vec![(0, 5), (0, 7)]);
    }

    #[test]
    fn interactions_reject_bad_tokens() {
        assert!(matches!(
            parse_interactions("0 x", &p()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_interactions("0 1\n2 -3", &p()),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn kg_basic() {
        let t = parse_kg("2 0 9\n2 0 9\n", &p()).unwrap();
        assert_eq!(t, vec![(2, 0, 9)]);
        assert!(parse_kg("", &p()).unwrap().is_empty());
        assert!(matches!(
            parse_kg("1 2", &p()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn inverse_relations_definition() {
        let out = add_inverse_relations(&[(2, 0, 9)], 3).unwrap();
        assert_eq!(out, vec![(2, 0, 9), (9, 3, 2)]);

        let out = add_inverse_relations(&[(4, 1, 4)], 3).unwrap();
        assert_eq!(out, vec![(4, 1, 4), (4, 4, 4)]);

        assert!(add_inverse_relations(&[], 3).unwrap().is_empty());
        assert!(add_inverse_relations(&[(0, 3, 1)], 3).is_err());
    }

    #[test]
    fn inverse_relations_double_count_without_duplicates() {
        let canon = vec![(0, 0, 5), (1, 1, 5), (5, 0, 2)];
        let out = add_inverse_relations(&canon, 2).unwrap();
        assert_eq!(out.len(), 2 * canon.len());
    }
}
