//! Blocks, collections and multi-way trade families.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of the ground set. Ids are dense non-negative integers; display
/// labels live in the family's label table.
pub type Element = u32;

/// Default rendering of an element id: a base-36 digit below 36, decimal above.
pub fn default_label(x: Element) -> String {
    if x < 36 {
        char::from_digit(x, 36).unwrap().to_string()
    } else {
        x.to_string()
    }
}

/// A set of elements, stored sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Element>", into = "Vec<Element>")]
pub struct Block(Vec<Element>);

impl Block {
    pub fn new(elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut v: Vec<Element> = elements.into_iter().collect();
        v.sort_unstable();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(format!("element {} repeated in block", w[0])));
        }
        Ok(Block(v))
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// True when every element of the sorted slice `subset` lies in the block.
    pub fn contains_all(&self, subset: &[Element]) -> bool {
        subset.iter().all(|&x| self.contains(x))
    }

    /// The block with `extra` elements added.
    pub fn extended(&self, extra: &[Element]) -> Result<Self> {
        Block::new(self.0.iter().chain(extra).copied())
    }

    /// The block with `x` removed (no-op when absent).
    pub fn without(&self, x: Element) -> Self {
        Block(self.0.iter().copied().filter(|&y| y != x).collect())
    }

    pub(crate) fn mapped(&self, f: impl Fn(Element) -> Element) -> Result<Self> {
        Block::new(self.0.iter().map(|&x| f(x)))
    }
}

impl TryFrom<Vec<Element>> for Block {
    type Error = Error;
    fn try_from(v: Vec<Element>) -> Result<Self> {
        Block::new(v)
    }
}

impl From<Block> for Vec<Element> {
    fn from(b: Block) -> Self {
        b.0
    }
}

/// One side `T_i` of a trade: a multiset of blocks kept in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collection {
    blocks: Vec<Block>,
}

impl Collection {
    pub fn new(mut blocks: Vec<Block>) -> Self {
        blocks.sort();
        Collection { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Block> {
        self.blocks.iter()
    }

    /// Multiplicity of `block` in this collection.
    pub fn count(&self, block: &Block) -> usize {
        let lo = self.blocks.partition_point(|b| b < block);
        let hi = self.blocks.partition_point(|b| b <= block);
        hi - lo
    }

    pub fn elements(&self) -> BTreeSet<Element> {
        self.blocks.iter().flat_map(|b| b.elements().iter().copied()).collect()
    }
}

impl FromIterator<Block> for Collection {
    fn from_iter<I: IntoIterator<Item = Block>>(iter: I) -> Self {
        Collection::new(iter.into_iter().collect())
    }
}

/// A μ-way trade candidate with declared block size `k` and strength `t`.
///
/// The type only enforces structural sanity (μ ≥ 2, t < k, blocks are sets).
/// Equal volumes, uniform block size, disjointness and balance are checked by
/// [`crate::verify::verify`], which reports every violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyDoc", into = "FamilyDoc")]
pub struct TradeFamily {
    k: usize,
    t: usize,
    collections: Vec<Collection>,
    labels: BTreeMap<Element, String>,
}

impl TradeFamily {
    pub fn new(k: usize, t: usize, collections: Vec<Collection>) -> Result<Self> {
        if collections.len() < 2 {
            return Err(Error::param(format!(
                "a trade needs at least 2 collections, got {}",
                collections.len()
            )));
        }
        if t >= k {
            return Err(Error::param(format!("strength t={t} must be below block size k={k}")));
        }
        Ok(TradeFamily { k, t, collections, labels: BTreeMap::new() })
    }

    /// Builds a family from raw element lists, one `Vec` of blocks per collection.
    pub fn from_raw(k: usize, t: usize, collections: Vec<Vec<Vec<Element>>>) -> Result<Self> {
        let cols = collections
            .into_iter()
            .map(|c| c.into_iter().map(Block::new).collect::<Result<Vec<_>>>().map(Collection::new))
            .collect::<Result<Vec<_>>>()?;
        TradeFamily::new(k, t, cols)
    }

    /// The void family: μ empty collections.
    pub fn void(mu: usize, k: usize, t: usize) -> Result<Self> {
        TradeFamily::new(k, t, vec![Collection::default(); mu])
    }

    /// Attaches display labels. Labels equal to the default rendering are dropped.
    pub fn with_labels(mut self, labels: BTreeMap<Element, String>) -> Self {
        self.labels = labels.into_iter().filter(|(x, l)| *l != default_label(*x)).collect();
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels.clear();
        self
    }

    pub fn mu(&self) -> usize {
        self.collections.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Size of the first collection; `verify` checks the others agree.
    pub fn volume(&self) -> usize {
        self.collections[0].len()
    }

    pub fn is_void(&self) -> bool {
        self.collections.iter().all(Collection::is_empty)
    }

    pub fn collections(&self) -> &[Collection] {
        &self.collections
    }

    pub fn collection(&self, i: usize) -> &Collection {
        &self.collections[i]
    }

    pub fn labels(&self) -> &BTreeMap<Element, String> {
        &self.labels
    }

    pub fn label(&self, x: Element) -> String {
        self.labels.get(&x).cloned().unwrap_or_else(|| default_label(x))
    }

    /// Looks an element up by its display label.
    pub fn element(&self, label: &str) -> Option<Element> {
        if let Some((&x, _)) = self.labels.iter().find(|(_, l)| l.as_str() == label) {
            return Some(x);
        }
        self.foundation().into_iter().find(|&x| !self.labels.contains_key(&x) && default_label(x) == label)
    }

    /// Union of all elements over all collections.
    pub fn foundation(&self) -> BTreeSet<Element> {
        self.collections.iter().flat_map(|c| c.elements()).collect()
    }

    pub fn max_element(&self) -> Option<Element> {
        self.collections.iter().flat_map(|c| c.iter()).filter_map(|b| b.elements().last().copied()).max()
    }

    pub(crate) fn with_parts(&self, k: usize, t: usize, collections: Vec<Collection>) -> Result<Self> {
        let keep: BTreeSet<Element> = collections.iter().flat_map(|c| c.elements()).collect();
        let labels = self.labels.iter().filter(|(x, _)| keep.contains(x)).map(|(x, l)| (*x, l.clone())).collect();
        Ok(TradeFamily::new(k, t, collections)?.with_labels(labels))
    }

    /// Block lists as raw element vectors.
    pub fn to_raw(&self) -> Vec<Vec<Vec<Element>>> {
        self.collections
            .iter()
            .map(|c| c.iter().map(|b| b.elements().to_vec()).collect())
            .collect()
    }
}

impl fmt::Display for TradeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.foundation().iter().all(|&x| self.label(x).chars().count() == 1);
        let sep = if single { "" } else { " " };
        writeln!(f, "{}-way (k={}, t={}) family of volume {}", self.mu(), self.k, self.t, self.volume())?;
        let rows = self.collections.iter().map(Collection::len).max().unwrap_or(0);
        for r in 0..rows {
            let cells: Vec<String> = self
                .collections
                .iter()
                .map(|c| {
                    c.blocks()
                        .get(r)
                        .map(|b| b.elements().iter().map(|&x| self.label(x)).collect::<Vec<_>>().join(sep))
                        .unwrap_or_default()
                })
                .collect();
            writeln!(f, "  {}", cells.join(" | "))?;
        }
        Ok(())
    }
}

/// JSON document shape for a family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub mu: usize,
    pub k: usize,
    pub t: usize,
    pub collections: Vec<Vec<Vec<Element>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<Element, String>,
}

impl TryFrom<FamilyDoc> for TradeFamily {
    type Error = Error;
    fn try_from(doc: FamilyDoc) -> Result<Self> {
        if doc.collections.len() != doc.mu {
            return Err(Error::Format(format!(
                "mu = {} but {} collections given",
                doc.mu,
                doc.collections.len()
            )));
        }
        Ok(TradeFamily::from_raw(doc.k, doc.t, doc.collections)?.with_labels(doc.labels))
    }
}

impl From<TradeFamily> for FamilyDoc {
    fn from(f: TradeFamily) -> Self {
        FamilyDoc { mu: f.mu(), k: f.k, t: f.t, collections: f.to_raw(), labels: f.labels }
    }
}
