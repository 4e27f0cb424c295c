//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::Rng;
use tradekit::canon::{canonical_key, CanonKey};
use tradekit::{Element, TradeFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    pub valid: bool,
    pub coverage_ok: bool,
    pub steiner: bool,
    pub solely_balanced: bool,
}

/// All `r`-subsets of `items`, in lexicographic order.
pub fn subsets(items: &[Element], r: usize) -> Vec<Vec<Element>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if r > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - r {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn contains_all(block: &[Element], s: &[Element]) -> bool {
    s.iter().all(|x| block.contains(x))
}

/// Checks a family by brute force: every `t`-subset of the union of all
/// blocks is counted against every block.
pub fn oracle(family: &TradeFamily) -> Oracle {
    let raw = family.to_raw();
    let (k, t) = (family.k(), family.t());
    let volumes = raw.iter().all(|c| c.len() == raw[0].len());
    let sizes = raw.iter().flatten().all(|b| b.len() == k && b.iter().collect::<BTreeSet<_>>().len() == k);
    let mut disjoint = true;
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if raw[i].iter().any(|b| raw[j].contains(b)) {
                disjoint = false;
            }
        }
    }
    let founds: Vec<BTreeSet<Element>> = raw.iter().map(|c| c.iter().flatten().copied().collect()).collect();
    let same_foundation = founds.iter().all(|f| *f == founds[0]);
    let union: Vec<Element> = founds.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();

    let count = |c: &Vec<Vec<Element>>, s: &[Element]| c.iter().filter(|b| contains_all(b, s)).count();
    let mut coverage_ok = true;
    let mut steiner = true;
    for s in subsets(&union, t) {
        let counts: Vec<usize> = raw.iter().map(|c| count(c, &s)).collect();
        if counts.iter().any(|&c| c != counts[0]) {
            coverage_ok = false;
        }
        if counts.iter().any(|&c| c > 1) {
            steiner = false;
        }
    }
    let mut solely_balanced = steiner;
    if steiner {
        for s in subsets(&union, t + 1) {
            if raw.iter().filter(|c| count(c, &s) > 0).count() >= 2 {
                solely_balanced = false;
            }
        }
    }
    Oracle {
        valid: volumes && sizes && disjoint && same_foundation && coverage_ok,
        coverage_ok,
        steiner,
        solely_balanced,
    }
}

/// Replaces one element of one block with another element not already in
/// that block, drawn from the foundation plus one fresh id.
pub fn mutate(family: &TradeFamily, rng: &mut StdRng) -> TradeFamily {
    let mut raw = family.to_raw();
    let mut pool: Vec<Element> = family.foundation().into_iter().collect();
    pool.push(family.max_element().unwrap_or(0) + 1);
    let c = rng.gen_range(0..raw.len());
    let b = rng.gen_range(0..raw[c].len());
    let p = rng.gen_range(0..raw[c][b].len());
    let block = raw[c][b].clone();
    let choices: Vec<Element> = pool.into_iter().filter(|x| !block.contains(x)).collect();
    raw[c][b][p] = choices[rng.gen_range(0..choices.len())];
    raw[c][b].sort_unstable();
    TradeFamily::from_raw(family.k(), family.t(), raw).expect("mutation keeps blocks well formed")
}

/// Isomorphism classes of μ-way `(v, k, t)` trades of volume `m` on at most
/// `v` points, by enumerating every multiset of `m` blocks over `0..v`.
pub fn brute_force_classes(mu: usize, k: usize, t: usize, m: usize, v: usize, steiner: bool) -> BTreeSet<CanonKey> {
    let points: Vec<Element> = (0..v as Element).collect();
    let blocks = subsets(&points, k);
    let mut by_coverage: BTreeMap<Vec<usize>, Vec<Vec<Vec<Element>>>> = BTreeMap::new();
    let tsets = subsets(&points, t);
    let mut pick = vec![0usize; m];
    loop {
        let col: Vec<Vec<Element>> = pick.iter().map(|&i| blocks[i].clone()).collect();
        let cov: Vec<usize> = tsets.iter().map(|s| col.iter().filter(|b| contains_all(b, s)).count()).collect();
        if !steiner || cov.iter().all(|&c| c <= 1) {
            by_coverage.entry(cov).or_default().push(col);
        }
        // Next nondecreasing index sequence.
        let mut i = m;
        loop {
            if i == 0 {
                return collect_classes(mu, k, t, &by_coverage);
            }
            i -= 1;
            if pick[i] + 1 < blocks.len() {
                break;
            }
        }
        let next = pick[i] + 1;
        for p in &mut pick[i..] {
            *p = next;
        }
    }
}

fn collect_classes(mu: usize, k: usize, t: usize, groups: &BTreeMap<Vec<usize>, Vec<Vec<Vec<Element>>>>) -> BTreeSet<CanonKey> {
    let mut out = BTreeSet::new();
    for cols in groups.values() {
        let idx: Vec<Element> = (0..cols.len() as Element).collect();
        for choice in subsets(&idx, mu) {
            let fam: Vec<Vec<Vec<Element>>> = choice.iter().map(|&i| cols[i as usize].clone()).collect();
            let disjoint = (0..mu).all(|a| (a + 1..mu).all(|b| fam[a].iter().all(|x| !fam[b].contains(x))));
            if disjoint {
                let f = TradeFamily::from_raw(k, t, fam).unwrap();
                assert!(oracle(&f).valid);
                out.insert(canonical_key(&f));
            }
        }
    }
    out
}
