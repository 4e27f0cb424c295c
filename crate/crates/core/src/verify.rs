//! Coverage counting and the trade verifier.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Block, Collection, Element, TradeFamily};

/// Calls `f` on every `t`-subset of the sorted slice `items`, in lexicographic order.
pub fn for_each_subset(items: &[Element], t: usize, mut f: impl FnMut(&[Element])) {
    fn rec(items: &[Element], t: usize, start: usize, buf: &mut Vec<Element>, f: &mut dyn FnMut(&[Element])) {
        if buf.len() == t {
            f(buf);
            return;
        }
        let need = t - buf.len();
        for i in start..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            buf.push(items[i]);
            rec(items, t, i + 1, buf, f);
            buf.pop();
        }
    }
    if t > items.len() {
        return;
    }
    rec(items, t, 0, &mut Vec::with_capacity(t), &mut f);
}

fn coverage_lenient(collection: &Collection, t: usize) -> BTreeMap<Vec<Element>, usize> {
    let mut counts = BTreeMap::new();
    if t == 0 {
        counts.insert(Vec::new(), collection.len());
        return counts;
    }
    for b in collection.iter() {
        for_each_subset(b.elements(), t, |s| *counts.entry(s.to_vec()).or_insert(0) += 1);
    }
    counts
}

/// Number of blocks (with multiplicity) containing each `t`-subset. Subsets
/// with count zero are omitted, except that `t = 0` always yields the empty
/// set with count equal to the collection size.
pub fn coverage(collection: &Collection, t: usize) -> Result<BTreeMap<Vec<Element>, usize>> {
    if let Some(b) = collection.iter().find(|b| b.len() < t) {
        return Err(Error::param(format!("t = {t} exceeds block size {}", b.len())));
    }
    Ok(coverage_lenient(collection, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    VolumeMismatch,
    BlockSize,
    SharedBlock,
    CoverageMismatch,
    SteinerViolation,
    SolelyBalancedViolation,
}

impl FailureKind {
    /// Kinds that make a family fail to be a trade at all.
    pub fn is_fatal(self) -> bool {
        matches!(
            self,
            FailureKind::VolumeMismatch
                | FailureKind::BlockSize
                | FailureKind::SharedBlock
                | FailureKind::CoverageMismatch
        )
    }
}

/// One piece of evidence: the offending subset and its count in each collection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub witness: Vec<Element>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub steiner: bool,
    pub solely_balanced: bool,
    pub failures: Vec<Failure>,
    /// Blocks occurring more than once inside a single collection. Permitted,
    /// but never in a Steiner family.
    pub repeated_blocks: Vec<Block>,
}

impl VerificationReport {
    pub fn failures_of(&self, kind: FailureKind) -> impl Iterator<Item = &Failure> {
        self.failures.iter().filter(move |f| f.kind == kind)
    }

    pub fn first_fatal(&self) -> Option<&Failure> {
        self.failures.iter().find(|f| f.kind.is_fatal())
    }
}

/// Checks every defining property of a μ-way `(v, k, t)` trade.
///
/// Order of checks: equal volumes, uniform block size `k`, pairwise
/// disjointness of collections, a common foundation, and equal `t`-subset
/// coverage. The Steiner property (every `t`-subset at most once per
/// collection) and, for Steiner families, `t`-solely-balancedness (no
/// `(t+1)`-subset shared by two collections) are reported alongside.
pub fn verify(family: &TradeFamily) -> VerificationReport {
    let mu = family.mu();
    let k = family.k();
    let t = family.t();
    let cols = family.collections();
    let mut failures = Vec::new();

    let sizes: Vec<usize> = cols.iter().map(Collection::len).collect();
    if sizes.iter().any(|&s| s != sizes[0]) {
        failures.push(Failure { kind: FailureKind::VolumeMismatch, witness: vec![], counts: sizes });
    }

    let mut bad_sizes = BTreeSet::new();
    for c in cols {
        for b in c.iter().filter(|b| b.len() != k) {
            bad_sizes.insert(b.clone());
        }
    }
    for b in bad_sizes {
        let counts = cols.iter().map(|c| c.count(&b)).collect();
        failures.push(Failure { kind: FailureKind::BlockSize, witness: b.elements().to_vec(), counts });
    }

    let mut seen: BTreeMap<&Block, usize> = BTreeMap::new();
    let mut shared = BTreeSet::new();
    let mut repeated = BTreeSet::new();
    for (i, c) in cols.iter().enumerate() {
        for w in c.blocks().windows(2) {
            if w[0] == w[1] {
                repeated.insert(w[0].clone());
            }
        }
        for b in c.iter() {
            match seen.get(b) {
                Some(&j) if j != i => {
                    shared.insert(b.clone());
                }
                Some(_) => {}
                None => {
                    seen.insert(b, i);
                }
            }
        }
    }
    for b in &shared {
        let counts = cols.iter().map(|c| c.count(b)).collect();
        failures.push(Failure { kind: FailureKind::SharedBlock, witness: b.elements().to_vec(), counts });
    }

    // Foundation equality, reported as 1-subset coverage. At t = 1 the
    // coverage pass below reports the same records.
    if t != 1 {
        let per: Vec<BTreeMap<Vec<Element>, usize>> = cols.iter().map(|c| coverage_lenient(c, 1)).collect();
        let all: BTreeSet<&Vec<Element>> = per.iter().flat_map(|m| m.keys()).collect();
        for x in all {
            let counts: Vec<usize> = per.iter().map(|m| m.get(x).copied().unwrap_or(0)).collect();
            if counts.iter().any(|&c| c == 0) {
                failures.push(Failure { kind: FailureKind::CoverageMismatch, witness: x.clone(), counts });
            }
        }
    }

    let covs: Vec<BTreeMap<Vec<Element>, usize>> = cols.iter().map(|c| coverage_lenient(c, t)).collect();
    let keys: BTreeSet<&Vec<Element>> = covs.iter().flat_map(|m| m.keys()).collect();
    let mut steiner = true;
    for s in keys {
        let counts: Vec<usize> = covs.iter().map(|m| m.get(s).copied().unwrap_or(0)).collect();
        if counts.iter().any(|&c| c != counts[0]) {
            failures.push(Failure { kind: FailureKind::CoverageMismatch, witness: s.clone(), counts: counts.clone() });
        }
        if counts.iter().any(|&c| c > 1) {
            steiner = false;
            failures.push(Failure { kind: FailureKind::SteinerViolation, witness: s.clone(), counts });
        }
    }

    let mut solely_balanced = false;
    if steiner {
        solely_balanced = true;
        let higher: Vec<BTreeMap<Vec<Element>, usize>> = cols.iter().map(|c| coverage_lenient(c, t + 1)).collect();
        let keys: BTreeSet<&Vec<Element>> = higher.iter().flat_map(|m| m.keys()).collect();
        for s in keys {
            let counts: Vec<usize> = higher.iter().map(|m| m.get(s).copied().unwrap_or(0)).collect();
            if counts.iter().filter(|&&c| c > 0).count() >= 2 {
                solely_balanced = false;
                failures.push(Failure { kind: FailureKind::SolelyBalancedViolation, witness: s.clone(), counts });
            }
        }
    }
    debug_assert_eq!(mu, cols.len());

    let valid = !failures.iter().any(|f| f.kind.is_fatal());
    VerificationReport { valid, steiner, solely_balanced, failures, repeated_blocks: repeated.into_iter().collect() }
}
