//! Replication numbers, pair frequencies, stars, derived trades and relabeling.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::model::{Collection, Element, TradeFamily};

/// `r_x`: number of blocks of the first collection containing `x`.
///
/// For a verified family with `t >= 1` every collection gives the same value.
pub fn replication(family: &TradeFamily, x: Element) -> usize {
    replication_in(family.collection(0), x)
}

pub fn replication_in(collection: &Collection, x: Element) -> usize {
    collection.iter().filter(|b| b.contains(x)).count()
}

/// `λ_xy`: number of blocks of the first collection containing both `x` and `y`.
pub fn pair_frequency(family: &TradeFamily, x: Element, y: Element) -> Result<usize> {
    if x == y {
        return Err(Error::param("pair frequency needs two distinct elements"));
    }
    Ok(family.collection(0).iter().filter(|b| b.contains(x) && b.contains(y)).count())
}

/// Splits every collection into the blocks through `x` (the star) and the rest.
///
/// Both parts are returned with strength `t - 1`; for a verified trade each
/// part is itself a trade at that strength.
pub fn star_split(family: &TradeFamily, x: Element) -> Result<(TradeFamily, TradeFamily)> {
    if family.t() == 0 {
        return Err(Error::param("star split needs t >= 1"));
    }
    if !family.foundation().contains(&x) {
        return Err(Error::NotInFoundation(x));
    }
    let (star, rest): (Vec<Collection>, Vec<Collection>) = family
        .collections()
        .iter()
        .map(|c| {
            let (a, b): (Vec<_>, Vec<_>) = c.iter().cloned().partition(|b| b.contains(x));
            (Collection::new(a), Collection::new(b))
        })
        .unzip();
    let t = family.t() - 1;
    Ok((family.with_parts(family.k(), t, star)?, family.with_parts(family.k(), t, rest)?))
}

/// The derived trade at `x`: the star with `x` deleted from every block.
pub fn derived(family: &TradeFamily, x: Element) -> Result<TradeFamily> {
    if family.k() < 2 {
        return Err(Error::param("derived trade needs k >= 2"));
    }
    let (star, _) = star_split(family, x)?;
    let cols = star.collections().iter().map(|c| c.iter().map(|b| b.without(x)).collect()).collect();
    family.with_parts(family.k() - 1, family.t() - 1, cols)
}

/// Applies an element mapping; it must be injective on the foundation.
/// Elements missing from `mapping` are left unchanged.
pub fn relabel(family: &TradeFamily, mapping: &HashMap<Element, Element>) -> Result<TradeFamily> {
    let image = |x: Element| mapping.get(&x).copied().unwrap_or(x);
    let mut inverse: BTreeMap<Element, Element> = BTreeMap::new();
    for x in family.foundation() {
        if let Some(prev) = inverse.insert(image(x), x) {
            return Err(Error::NonInjective(prev, x, image(x)));
        }
    }
    let cols = family
        .collections()
        .iter()
        .map(|c| c.iter().map(|b| b.mapped(image)).collect::<Result<Collection>>())
        .collect::<Result<Vec<_>>>()?;
    let labels = family.labels().iter().map(|(&x, l)| (image(x), l.clone())).collect();
    Ok(TradeFamily::new(family.k(), family.t(), cols)?.with_labels(labels))
}

/// Adds `delta` to every element id.
pub fn offset(family: &TradeFamily, delta: Element) -> Result<TradeFamily> {
    let mapping = family.foundation().into_iter().map(|x| (x, x + delta)).collect();
    relabel(family, &mapping)
}
