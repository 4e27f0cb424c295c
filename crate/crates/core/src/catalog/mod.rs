//! Embedded corpus of explicit trades, verified on load.

pub mod format;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Block, Collection, Element, TradeFamily};
use crate::verify::{coverage, for_each_subset, verify, VerificationReport};

pub use format::{parse_any, parse_compact, parse_json, serialize, Format};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Transcribed from a published table.
    Published { source: &'static str },
    /// Produced by the search module and frozen.
    Mined { search: &'static str, date: &'static str },
}

#[derive(Debug, Clone, Serialize)]
pub struct Expected {
    pub mu: usize,
    pub k: usize,
    pub t: usize,
    pub volume: usize,
    pub foundation: usize,
    pub steiner: bool,
    pub solely_balanced: bool,
}

/// Record of a transcription defect and its fix.
#[derive(Debug, Clone, Serialize)]
pub struct RepairNote {
    /// The document as transcribed.
    pub original: &'static str,
    /// Collection (1-based) holding the defective block.
    pub collection: usize,
    pub replaced: &'static str,
    pub replacement: &'static str,
    /// `t`-subsets whose coverage differed across collections before repair.
    pub witnesses: &'static [&'static str],
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub family: TradeFamily,
    pub provenance: Provenance,
    pub expected: Expected,
    pub repair: Option<RepairNote>,
    pub report: VerificationReport,
}

struct Source {
    name: &'static str,
    text: &'static str,
    provenance: Provenance,
    expected: Expected,
    repair: Option<RepairNote>,
}

const fn exp(mu: usize, k: usize, t: usize, volume: usize, foundation: usize, steiner: bool, solely_balanced: bool) -> Expected {
    Expected { mu, k, t, volume, foundation, steiner, solely_balanced }
}

macro_rules! src {
    ($name:literal, $prov:expr, $exp:expr) => {
        Source { name: $name, text: include_str!(concat!("../../catalog/", $name, ".compact")), provenance: $prov, expected: $exp, repair: None }
    };
    ($name:literal, $prov:expr, $exp:expr, $repair:expr) => {
        Source { name: $name, text: include_str!(concat!("../../catalog/", $name, ".compact")), provenance: $prov, expected: $exp, repair: Some($repair) }
    };
}

const fn published(source: &'static str) -> Provenance {
    Provenance::Published { source }
}

fn sources() -> Vec<Source> {
    vec![
        src!("ex1.3-v8", published("worked example: 3-way (8,3,2) Steiner trade, volume 8"), exp(3, 3, 2, 8, 8, true, true)),
        src!("ex1.3-v13", published("worked example: 3-way (11,3,2) Steiner trade, volume 13"), exp(3, 3, 2, 13, 11, true, true)),
        src!("ex2.3-in", published("blow-up example input: 3-way (4,2,1) Steiner trade, volume 2"), exp(3, 2, 1, 2, 4, true, true)),
        src!("ex2.3-out", published("blow-up example output: 3-way (7,3,2) Steiner trade, volume 6"), exp(3, 3, 2, 6, 7, true, true)),
        src!("ex3.5-k2", published("one-factor example: 3-way (4,2,1) Steiner trade, volume 2"), exp(3, 2, 1, 2, 4, true, true)),
        src!("ex3.5-k4", published("padding example: 3-way (8,4,1) Steiner trade, volume 2"), exp(3, 4, 1, 2, 8, true, false)),
        src!("thm3.8-m4", published("explicit 1-solely balanced 3-way (12,3,1) Steiner trade, volume 4"), exp(3, 3, 1, 4, 12, true, true)),
        src!("ex3.10-kts9-classes", published("the four parallel classes of a KTS(9), read as a 4-way (9,3,1) trade"), exp(4, 3, 1, 3, 9, true, true)),
        src!("ex3.10-v3", published("three parallel classes of a KTS(9): 3-way (9,3,1) trade, volume 3"), exp(3, 3, 1, 3, 9, true, true)),
        src!("ex3.10-v9", published("blow-up of the KTS(9) trade: 3-way (12,4,2) Steiner trade, volume 9"), exp(3, 4, 2, 9, 12, true, false)),
        src!("appendix-m8", published("base-case table: 3-way (v,4,2) Steiner trade, volume 8"), exp(3, 4, 2, 8, 12, true, false)),
        src!("appendix-m10", published("base-case table: 3-way (v,4,2) Steiner trade, volume 10"), exp(3, 4, 2, 10, 13, true, false)),
        src!("appendix-m11", published("base-case table: 3-way (v,4,2) Steiner trade, volume 11"), exp(3, 4, 2, 11, 13, true, false)),
        src!(
            "appendix-m13",
            published("base-case table: 3-way (v,4,2) Steiner trade, volume 13"),
            exp(3, 4, 2, 13, 13, true, false),
            RepairNote {
                original: include_str!("../../catalog/appendix-m13.original.compact"),
                collection: 2,
                replaced: "149c",
                replacement: "1349",
                witnesses: &["13", "1c", "34", "39", "4c", "9c"],
                note: "as transcribed, collection 2 covers 1c, 4c, 9c twice and 13, 34, 39 never; \
                       re-solving that single block with all other rows fixed gives the unique fix 1349",
            }
        ),
        src!(
            "appendix-m14",
            published("base-case table: 3-way (v,4,2) Steiner trade, volume 14"),
            exp(3, 4, 2, 14, 16, true, false),
            RepairNote {
                original: include_str!("../../catalog/appendix-m14.original.compact"),
                collection: 2,
                replaced: "1abc",
                replacement: "1bce",
                witnesses: &["1a", "1e", "ab", "ac", "be", "ce"],
                note: "as transcribed, collection 2 covers 1a, ab, ac twice and 1e, be, ce never; \
                       re-solving that single block with all other rows fixed gives the unique fix 1bce \
                       (the table also repeats the row `24ce 04ca 14ce` beside its label; the duplicate is dropped)",
            }
        ),
        src!("appendix-m16", published("base-case table: 3-way (v,4,2) Steiner trade, volume 16"), exp(3, 4, 2, 16, 16, true, false)),
        src!(
            "mined-k3-v10",
            Provenance::Mined { search: "mine_base(10, 3): first witness, 3-way (v,3,2) Steiner, foundation sizes ascending", date: "2026-10-16" },
            exp(3, 3, 2, 10, 9, true, true)
        ),
        src!(
            "mined-k3-v11",
            Provenance::Mined { search: "mine_base(11, 3): first witness, 3-way (v,3,2) Steiner, foundation sizes ascending", date: "2026-10-16" },
            exp(3, 3, 2, 11, 9, true, true)
        ),
    ]
}

fn check(src: Source) -> Result<CatalogEntry> {
    let fail = |message: String| Error::Catalog { name: src.name.to_string(), message };
    let family = parse_compact(src.text).map_err(|e| fail(e.to_string()))?;
    let report = verify(&family);
    if let Some(f) = report.first_fatal() {
        return Err(fail(format!("does not verify: {f:?}")));
    }
    let e = &src.expected;
    let got = (family.mu(), family.k(), family.t(), family.volume(), family.foundation().len(), report.steiner, report.solely_balanced);
    let want = (e.mu, e.k, e.t, e.volume, e.foundation, e.steiner, e.solely_balanced);
    if got != want {
        return Err(fail(format!("expected (mu,k,t,m,v,steiner,solely) = {want:?}, got {got:?}")));
    }
    Ok(CatalogEntry { name: src.name, family, provenance: src.provenance, expected: src.expected, repair: src.repair, report })
}

/// Parses and verifies every embedded entry.
pub fn load_all() -> Result<Vec<CatalogEntry>> {
    sources().into_iter().map(check).collect()
}

static CATALOG: OnceLock<std::result::Result<Vec<CatalogEntry>, String>> = OnceLock::new();

/// The catalog, loaded once per process.
pub fn entries() -> Result<&'static [CatalogEntry]> {
    CATALOG
        .get_or_init(|| load_all().map_err(|e| e.to_string()))
        .as_deref()
        .map_err(|m| Error::Catalog { name: "*".into(), message: m.clone() })
}

pub fn get(name: &str) -> Result<&'static CatalogEntry> {
    entries()?
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Catalog { name: name.to_string(), message: "no such entry".into() })
}

pub fn names() -> Vec<&'static str> {
    sources().iter().map(|s| s.name).collect()
}

/// Re-solves a single block of collection `target` (0-based) so that its
/// coverage matches collection `reference`, keeping every other block.
///
/// Returns all repaired families found, one per (removed block, new block)
/// choice; an empty result means no single-block repair exists.
pub fn repair_single_block(family: &TradeFamily, target: usize, reference: usize) -> Result<Vec<TradeFamily>> {
    let t = family.t();
    let k = family.k();
    let want = coverage(family.collection(reference), t)?;
    let blocks = family.collection(target).blocks();
    let mut out = Vec::new();
    for skip in 0..blocks.len() {
        let kept: Collection = blocks.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, b)| b.clone()).collect();
        let have = coverage(&kept, t)?;
        let mut residual: BTreeMap<Vec<Element>, usize> = BTreeMap::new();
        let mut feasible = true;
        for (s, &w) in &want {
            let h = have.get(s).copied().unwrap_or(0);
            if h > w {
                feasible = false;
                break;
            }
            if w > h {
                residual.insert(s.clone(), w - h);
            }
        }
        if !feasible || have.keys().any(|s| !want.contains_key(s)) {
            continue;
        }
        let mut elems: Vec<Element> = residual.keys().flatten().copied().collect();
        elems.sort_unstable();
        elems.dedup();
        if elems.len() != k {
            continue;
        }
        let mut expect = BTreeMap::new();
        for_each_subset(&elems, t, |s| {
            expect.insert(s.to_vec(), 1usize);
        });
        if expect != residual {
            continue;
        }
        let new_block = Block::new(elems)?;
        let mut cols = family.collections().to_vec();
        let mut nb = kept.blocks().to_vec();
        nb.push(new_block);
        cols[target] = Collection::new(nb);
        let fixed = family.with_parts(k, t, cols)?;
        if verify(&fixed).valid {
            out.push(fixed);
        }
    }
    Ok(out)
}
