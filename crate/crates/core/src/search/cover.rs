//! Exact cover with multiplicities: choose `slots` candidate blocks (repeats
//! allowed) whose `t`-subsets meet a demand vector exactly.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::Ticker;
use crate::model::Element;
use crate::verify::for_each_subset;

pub(crate) struct CoverProblem {
    demand: Vec<u32>,
    /// Items covered by each candidate.
    items: Vec<Vec<usize>>,
    /// Candidates containing each item, ascending.
    by_item: Vec<Vec<usize>>,
    pub(crate) blocks: Vec<Vec<Element>>,
}

fn combinations(pool: &[Element], k: usize, f: &mut impl FnMut(&[Element])) {
    fn rec(pool: &[Element], k: usize, start: usize, cur: &mut Vec<Element>, f: &mut impl FnMut(&[Element])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(pool, k, 0, &mut Vec::with_capacity(k), f);
}

impl CoverProblem {
    /// Candidates are the `k`-subsets of `foundation` whose `t`-subsets all
    /// have positive demand, minus `exclude`.
    pub(crate) fn new(
        demand: &BTreeMap<Vec<Element>, usize>,
        foundation: &[Element],
        k: usize,
        t: usize,
        exclude: &HashSet<Vec<Element>>,
    ) -> Self {
        let index: HashMap<&[Element], usize> = demand.keys().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let mut items = Vec::new();
        let mut blocks = Vec::new();
        combinations(foundation, k, &mut |b| {
            if exclude.contains(b) {
                return;
            }
            let mut its = Vec::new();
            let mut ok = true;
            for_each_subset(b, t, |s| match index.get(s) {
                Some(&i) if ok => its.push(i),
                _ => ok = false,
            });
            if ok {
                items.push(its);
                blocks.push(b.to_vec());
            }
        });
        let mut by_item = vec![Vec::new(); demand.len()];
        for (c, its) in items.iter().enumerate() {
            for &i in its {
                by_item[i].push(c);
            }
        }
        CoverProblem { demand: demand.values().map(|&d| d as u32).collect(), items, by_item, blocks }
    }

    /// Appends every cover of size `slots` (as a sorted candidate index
    /// list) to `out`. Returns false if the ticker stopped the search.
    pub(crate) fn solve(&self, slots: usize, ticker: &mut Ticker<'_>, out: &mut Vec<Vec<usize>>) -> bool {
        let mut st = State {
            demand: self.demand.clone(),
            banned: vec![false; self.items.len()],
            chosen: Vec::with_capacity(slots),
        };
        self.dfs(&mut st, slots, ticker, out)
    }

    fn usable(&self, st: &State, c: usize) -> bool {
        !st.banned[c] && self.items[c].iter().all(|&i| st.demand[i] > 0)
    }

    fn dfs(&self, st: &mut State, slots: usize, ticker: &mut Ticker<'_>, out: &mut Vec<Vec<usize>>) -> bool {
        if !ticker.tick_cover() {
            return false;
        }
        if slots == 0 {
            let mut c = st.chosen.clone();
            c.sort_unstable();
            out.push(c);
            return true;
        }
        // Most constrained open item.
        let mut best: Option<(usize, usize)> = None;
        for (i, &d) in st.demand.iter().enumerate() {
            if d == 0 {
                continue;
            }
            if d as usize > slots {
                return true;
            }
            let n = self.by_item[i].iter().filter(|&&c| self.usable(st, c)).count();
            if n == 0 {
                return true;
            }
            if best.map_or(true, |(_, m)| n < m) {
                best = Some((i, n));
            }
        }
        let Some((item, _)) = best else { return true };
        // Branch on the smallest-index candidate used for `item`; earlier
        // candidates are banned below, so each multiset is produced once.
        let mut banned_here = Vec::new();
        let mut cont = true;
        for &c in &self.by_item[item] {
            if !self.usable(st, c) {
                continue;
            }
            for &i in &self.items[c] {
                st.demand[i] -= 1;
            }
            st.chosen.push(c);
            cont = self.dfs(st, slots - 1, ticker, out);
            st.chosen.pop();
            for &i in &self.items[c] {
                st.demand[i] += 1;
            }
            if !cont {
                break;
            }
            st.banned[c] = true;
            banned_here.push(c);
        }
        for c in banned_here {
            st.banned[c] = false;
        }
        cont
    }
}

struct State {
    demand: Vec<u32>,
    banned: Vec<bool>,
    chosen: Vec<usize>,
}

/// Visits every choice of `need` pairwise disjoint covers (ascending
/// indices). Stops when `visit` returns false; returns false in that case.
pub(crate) fn disjoint_choices(covers: &[Vec<usize>], need: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let words = covers.iter().flatten().max().map_or(0, |&m| m / 64 + 1);
    let masks: Vec<Vec<u64>> = covers
        .iter()
        .map(|c| {
            let mut m = vec![0u64; words];
            for &x in c {
                m[x / 64] |= 1 << (x % 64);
            }
            m
        })
        .collect();
    fn rec(
        masks: &[Vec<u64>],
        need: usize,
        start: usize,
        acc: &mut Vec<u64>,
        chosen: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if chosen.len() == need {
            return visit(chosen);
        }
        for i in start..masks.len() {
            if acc.iter().zip(&masks[i]).any(|(a, b)| a & b != 0) {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(&masks[i]) {
                *a |= b;
            }
            chosen.push(i);
            let cont = rec(masks, need, i + 1, acc, chosen, visit);
            chosen.pop();
            for (a, b) in acc.iter_mut().zip(&masks[i]) {
                *a &= !b;
            }
            if !cont {
                return false;
            }
        }
        true
    }
    rec(&masks, need, 0, &mut vec![0; words], &mut Vec::with_capacity(need), visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::Shared;

    #[test]
    fn covers_of_a_pasch_configuration() {
        // Pairs of {012, 034, 135, 245}; the only other cover is the
        // complementary Pasch {013, 024, 125, 345}.
        let mut demand = BTreeMap::new();
        for b in [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]] {
            for_each_subset(&b, 2, |s| {
                *demand.entry(s.to_vec()).or_insert(0) += 1;
            });
        }
        let exclude: HashSet<Vec<Element>> = [[0, 1, 2], [0, 3, 4], [1, 3, 5], [2, 4, 5]].iter().map(|b| b.to_vec()).collect();
        let p = CoverProblem::new(&demand, &[0, 1, 2, 3, 4, 5], 3, 2, &exclude);
        let shared = Shared::new(None, None);
        let mut ticker = Ticker::new(&shared, 0);
        let mut out = Vec::new();
        assert!(p.solve(4, &mut ticker, &mut out));
        assert_eq!(out.len(), 1);
        let blocks: Vec<&Vec<Element>> = out[0].iter().map(|&c| &p.blocks[c]).collect();
        assert_eq!(blocks, vec![&vec![0, 1, 3], &vec![0, 2, 4], &vec![1, 2, 5], &vec![3, 4, 5]]);
    }

    #[test]
    fn multiset_covers_are_not_repeated() {
        // Demand 2 on each of 0..4 with k=2, t=1: 2-regular multigraphs.
        let demand: BTreeMap<Vec<Element>, usize> = (0..4).map(|x| (vec![x], 2)).collect();
        let p = CoverProblem::new(&demand, &[0, 1, 2, 3], 2, 1, &HashSet::new());
        let shared = Shared::new(None, None);
        let mut ticker = Ticker::new(&shared, 0);
        let mut out = Vec::new();
        p.solve(4, &mut ticker, &mut out);
        let mut seen = out.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), out.len());
        // Brute force over all multisets of 4 pairs.
        let mut brute = 0;
        let pairs: Vec<[usize; 2]> = (0..4).flat_map(|a| (a + 1..4).map(move |b| [a, b])).collect();
        for a in 0..6 {
            for b in a..6 {
                for c in b..6 {
                    for d in c..6 {
                        let mut deg = [0; 4];
                        for e in [a, b, c, d] {
                            deg[pairs[e][0]] += 1;
                            deg[pairs[e][1]] += 1;
                        }
                        if deg == [2; 4] {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(out.len(), brute);
    }

    #[test]
    fn disjoint_choices_skip_overlaps() {
        let covers = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![4]];
        let mut got = Vec::new();
        disjoint_choices(&covers, 2, &mut |c| {
            got.push(c.to_vec());
            true
        });
        assert_eq!(got, vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
    }
}
