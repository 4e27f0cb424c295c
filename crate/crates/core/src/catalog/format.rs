//! Compact text and JSON trade documents.
//!
//! Compact format:
//!
//! ```text
//! # comment
//! 3 3 2
//! collection 1
//! 123
//! 14 7        <- multi-token line: each token is one labeled element
//! collection 2
//! ...
//! ```
//!
//! A line holding a single token is a character run: each character in
//! `[0-9a-z]` is one element. A line with several tokens, or any comma,
//! lists one labeled element per token (whitespace or comma separated).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{Collection, Element, FamilyDoc, TradeFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Compact,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "compact" => Ok(Format::Compact),
            other => Err(Error::Format(format!("unknown format `{other}`"))),
        }
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Id a label maps to when it has a natural numeric reading.
fn natural_id(label: &str) -> Option<Element> {
    let mut chars = label.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => c.to_digit(36).filter(|_| !c.is_ascii_uppercase()),
        _ if label.bytes().all(|b| b.is_ascii_digit()) => label.parse().ok(),
        _ => None,
    }
}

/// Parses the compact format into a family with its label table.
pub fn parse_compact(text: &str) -> Result<TradeFamily> {
    let mut header: Option<(usize, usize, usize)> = None;
    // Each block is a list of (label, line, column).
    let mut cols: Vec<Vec<Vec<(String, usize, usize)>>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        let mut start = None;
        for (i, ch) in line.char_indices() {
            let sep = ch.is_whitespace() || ch == ',';
            match (sep, start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push((s, &line[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s, &line[s..]));
        }

        let Some((_, k, _)) = header else {
            if tokens.len() != 3 {
                return Err(perr(lineno, 1, "expected header `mu k t`"));
            }
            let mut nums = [0usize; 3];
            for (slot, (col, tok)) in nums.iter_mut().zip(&tokens) {
                *slot = tok.parse().map_err(|_| perr(lineno, col + 1, format!("bad integer `{tok}`")))?;
            }
            header = Some((nums[0], nums[1], nums[2]));
            continue;
        };

        if tokens[0].1 == "collection" {
            let expected = cols.len() + 1;
            let got: Option<usize> = tokens.get(1).and_then(|(_, s)| s.parse().ok());
            if tokens.len() != 2 || got != Some(expected) {
                return Err(perr(lineno, 1, format!("expected `collection {expected}`")));
            }
            cols.push(Vec::new());
            continue;
        }
        let Some(current) = cols.last_mut() else {
            return Err(perr(lineno, 1, "block before the first `collection` line"));
        };

        let mut block: Vec<(String, usize, usize)> = Vec::new();
        if tokens.len() == 1 && !line.contains(',') {
            let (col0, tok) = tokens[0];
            for (off, ch) in tok.char_indices() {
                if !(ch.is_ascii_digit() || ch.is_ascii_lowercase()) {
                    return Err(perr(lineno, col0 + off + 1, format!("unknown character `{ch}`")));
                }
                block.push((ch.to_string(), lineno, col0 + off + 1));
            }
        } else {
            for (col0, tok) in tokens {
                if let Some((off, ch)) = tok.char_indices().find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_')) {
                    return Err(perr(lineno, col0 + off + 1, format!("unknown character `{ch}`")));
                }
                block.push((tok.to_string(), lineno, col0 + 1));
            }
        }
        let mut seen = BTreeSet::new();
        for (label, l, c) in &block {
            if !seen.insert(label.as_str()) {
                return Err(perr(*l, *c, format!("element `{label}` repeated in block")));
            }
        }
        if block.len() != k {
            return Err(perr(lineno, 1, format!("block has {} elements, expected k = {k}", block.len())));
        }
        current.push(block);
    }

    let Some((mu, k, t)) = header else {
        return Err(perr(1, 1, "empty document"));
    };
    if cols.len() != mu {
        return Err(perr(text.lines().count().max(1), 1, format!("expected {mu} collections, found {}", cols.len())));
    }

    // Label → id: natural readings when they are collision-free, otherwise
    // dense ids in order of first appearance.
    let mut order: Vec<String> = Vec::new();
    for c in &cols {
        for b in c {
            for (label, _, _) in b {
                if !order.contains(label) {
                    order.push(label.clone());
                }
            }
        }
    }
    let mut ids: BTreeMap<String, Element> = BTreeMap::new();
    let naturals: Vec<Option<Element>> = order.iter().map(|l| natural_id(l)).collect();
    let taken: BTreeSet<Element> = naturals.iter().flatten().copied().collect();
    if taken.len() == naturals.iter().flatten().count() {
        let mut next = taken.iter().next_back().map_or(0, |m| m + 1);
        for (label, nat) in order.iter().zip(&naturals) {
            let id = nat.unwrap_or_else(|| {
                next += 1;
                next - 1
            });
            ids.insert(label.clone(), id);
        }
    } else {
        for (i, label) in order.iter().enumerate() {
            ids.insert(label.clone(), i as Element);
        }
    }

    let raw: Vec<Vec<Vec<Element>>> =
        cols.iter().map(|c| c.iter().map(|b| b.iter().map(|(l, _, _)| ids[l]).collect()).collect()).collect();
    let labels: BTreeMap<Element, String> = ids.into_iter().map(|(l, x)| (x, l)).collect();
    TradeFamily::from_raw(k, t, raw)
        .map(|f| f.with_labels(labels))
        .map_err(|e| perr(1, 1, e.to_string()))
}

pub fn parse_json(text: &str) -> Result<TradeFamily> {
    let doc: FamilyDoc = serde_json::from_str(text)?;
    TradeFamily::try_from(doc)
}

/// Parses either format, choosing JSON when the text starts with `{`.
pub fn parse_any(text: &str) -> Result<TradeFamily> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_compact(text)
    }
}

pub fn serialize(family: &TradeFamily, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(family)?),
        Format::Compact => to_compact(family),
    }
}

fn to_compact(family: &TradeFamily) -> Result<String> {
    let found = family.foundation();
    if let Some(x) = found.iter().find(|&&x| x >= 36 && !family.labels().contains_key(&x)) {
        return Err(Error::Format(format!(
            "element {x} has no label; compact format needs a label table beyond 36 elements"
        )));
    }
    let single = found.iter().all(|&x| {
        let l = family.label(x);
        l.chars().count() == 1 && natural_id(&l).is_some()
    });
    let mut out = format!("{} {} {}\n", family.mu(), family.k(), family.t());
    for (i, c) in family.collections().iter().enumerate() {
        out.push_str(&format!("collection {}\n", i + 1));
        for b in c.iter() {
            let labels: Vec<String> = b.elements().iter().map(|&x| family.label(x)).collect();
            if single {
                out.push_str(&labels.concat());
            } else if labels.len() == 1 {
                out.push_str(&labels[0]);
                out.push(',');
            } else {
                out.push_str(&labels.join(" "));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Rendering helper used by the CLI for one collection.
pub fn render_collection(family: &TradeFamily, c: &Collection) -> Vec<String> {
    c.iter()
        .map(|b| b.elements().iter().map(|&x| family.label(x)).collect::<Vec<_>>().join(" "))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_run_block() {
        let f = parse_compact("3 4 2\ncollection 1\n124a\ncollection 2\n125b\ncollection 3\n12ab\n").unwrap();
        assert_eq!(f.collection(0).blocks()[0].elements(), &[1, 2, 4, 10]);
        assert!(f.labels().is_empty());
    }

    #[test]
    fn multi_token_block() {
        let f = parse_compact("2 3 1\ncollection 1\n12 34 ab\ncollection 2\n12 34 cd\n").unwrap();
        let b = f.collection(0).blocks()[0].clone();
        let labels: Vec<String> = b.elements().iter().map(|&x| f.label(x)).collect();
        assert_eq!(labels, vec!["12", "34", "ab"]);
    }

    #[test]
    fn comma_separated_tokens() {
        let f = parse_compact("2 3 2\ncollection 1\n1, 2, 11\ncollection 2\n1, 2, 10\n").unwrap();
        assert_eq!(f.collection(0).blocks()[0].elements(), &[1, 2, 11]);
        assert_eq!(f.label(11), "11");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_compact("2 3 2\ncollection 1\n12X\ncollection 2\n123\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 3, .. }), "{e}");
        let e = parse_compact("2 3 2\ncollection 1\n121\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, column: 3, .. }), "{e}");
        let e = parse_compact("2 3 2\ncollection 1\n1234\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let e = parse_compact("2 3 2\ncollection 1\n123\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn colliding_naturals_fall_back_to_dense_ids() {
        let f = parse_compact("2 2 1\ncollection 1\na 10\ncollection 2\na 10\n").unwrap();
        assert_eq!(f.element("a"), Some(0));
        assert_eq!(f.element("10"), Some(1));
    }

    #[test]
    fn compact_refuses_unlabeled_large_ids() {
        let f = TradeFamily::from_raw(2, 1, vec![vec![vec![1, 40]], vec![vec![1, 41]]]).unwrap();
        assert!(serialize(&f, Format::Compact).is_err());
        assert!(serialize(&f, Format::Json).is_ok());
    }

    #[test]
    fn void_document() {
        let v = TradeFamily::void(3, 3, 2).unwrap();
        let text = serialize(&v, Format::Compact).unwrap();
        assert_eq!(parse_compact(&text).unwrap(), v);
        let json = serialize(&v, Format::Json).unwrap();
        assert_eq!(parse_json(&json).unwrap(), v);
    }
}
