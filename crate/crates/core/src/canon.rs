//! Canonical forms under element relabeling, block reordering and
//! collection reordering.
//!
//! Individualization-refinement: element colors are refined from
//! label-invariant signatures until stable, a non-singleton cell is split by
//! individualizing each of its members in turn, and every discrete leaf is
//! encoded as the sorted list of sorted collections. The least encoding wins.
//! Leaves with equal encodings yield automorphisms, whose orbits prune
//! sibling branches.

use crate::model::TradeFamily;

/// Collections → blocks → elements, relabeled to `0..v` and fully sorted.
pub type CanonKey = Vec<Vec<Vec<u32>>>;

struct Incidence {
    n: usize,
    cols: Vec<Vec<Vec<usize>>>,
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let mut uniq: Vec<T> = sigs.to_vec();
    uniq.sort();
    uniq.dedup();
    sigs.iter().map(|s| uniq.binary_search(s).unwrap() as u32).collect()
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

impl Incidence {
    fn refine(&self, colors: &mut Vec<u32>) {
        let mut count = distinct(colors);
        loop {
            let block_sigs: Vec<Vec<Vec<u32>>> = self
                .cols
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|b| {
                            let mut s: Vec<u32> = b.iter().map(|&x| colors[x]).collect();
                            s.sort_unstable();
                            s
                        })
                        .collect()
                })
                .collect();
            let col_sigs: Vec<Vec<Vec<u32>>> = block_sigs
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort();
                    c
                })
                .collect();
            let col_colors = rank(&col_sigs);
            let mut elem_sigs: Vec<(u32, Vec<(u32, Vec<u32>)>)> =
                colors.iter().map(|&c| (c, Vec::new())).collect();
            for (ci, c) in self.cols.iter().enumerate() {
                for (bi, b) in c.iter().enumerate() {
                    for &x in b {
                        elem_sigs[x].1.push((col_colors[ci], block_sigs[ci][bi].clone()));
                    }
                }
            }
            for s in &mut elem_sigs {
                s.1.sort();
            }
            *colors = rank(&elem_sigs);
            let next = distinct(colors);
            if next == count {
                return;
            }
            count = next;
        }
    }

    fn encode(&self, perm: &[u32]) -> CanonKey {
        let mut key: CanonKey = self
            .cols
            .iter()
            .map(|c| {
                let mut blocks: Vec<Vec<u32>> = c
                    .iter()
                    .map(|b| {
                        let mut v: Vec<u32> = b.iter().map(|&x| perm[x]).collect();
                        v.sort_unstable();
                        v
                    })
                    .collect();
                blocks.sort();
                blocks
            })
            .collect();
        key.sort();
        key
    }
}

struct Best {
    key: CanonKey,
    perm: Vec<u32>,
}

struct Searcher<'a> {
    inc: &'a Incidence,
    best: Option<Best>,
    autos: Vec<Vec<usize>>,
}

impl Searcher<'_> {
    fn same_orbit(&self, a: usize, b: usize, path: &[usize]) -> bool {
        let n = self.inc.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in self.autos.iter().filter(|g| path.iter().all(|&p| g[p] == p)) {
            for x in 0..n {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, g[x]));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        find(&mut parent, a) == find(&mut parent, b)
    }

    fn search(&mut self, mut colors: Vec<u32>, path: &mut Vec<usize>) {
        self.inc.refine(&mut colors);
        let n = self.inc.n;
        if distinct(&colors) == n {
            let key = self.inc.encode(&colors);
            match &self.best {
                Some(best) if key > best.key => {}
                Some(best) if key == best.key => {
                    let mut inv = vec![0usize; n];
                    for (x, &c) in best.perm.iter().enumerate() {
                        inv[c as usize] = x;
                    }
                    let g: Vec<usize> = colors.iter().map(|&c| inv[c as usize]).collect();
                    if g.iter().enumerate().any(|(i, &x)| i != x) {
                        self.autos.push(g);
                    }
                }
                _ => self.best = Some(Best { key, perm: colors }),
            }
            return;
        }
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = (0..n).find(|&c| sizes[c] > 1).unwrap() as u32;
        let cell: Vec<usize> = (0..n).filter(|&x| colors[x] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &w in &cell {
            if explored.iter().any(|&e| self.same_orbit(e, w, path)) {
                continue;
            }
            let sigs: Vec<(u32, bool)> = colors.iter().enumerate().map(|(x, &c)| (c, x != w)).collect();
            path.push(w);
            self.search(rank(&sigs), path);
            path.pop();
            explored.push(w);
        }
    }
}

/// The canonical encoding of `family` (labels ignored).
pub fn canonical_key(family: &TradeFamily) -> CanonKey {
    let found: Vec<u32> = family.foundation().into_iter().collect();
    let index = |x: u32| found.binary_search(&x).unwrap();
    let inc = Incidence {
        n: found.len(),
        cols: family
            .collections()
            .iter()
            .map(|c| c.iter().map(|b| b.elements().iter().map(|&x| index(x)).collect()).collect())
            .collect(),
    };
    if inc.n == 0 {
        return inc.encode(&[]);
    }
    let mut s = Searcher { inc: &inc, best: None, autos: Vec::new() };
    s.search(vec![0; inc.n], &mut Vec::new());
    s.best.unwrap().key
}

/// A representative of the isomorphism class of `family` on elements `0..v`.
pub fn canonical_form(family: &TradeFamily) -> TradeFamily {
    TradeFamily::from_raw(family.k(), family.t(), canonical_key(family))
        .expect("canonical relabeling of a well-formed family is well-formed")
}

pub fn is_isomorphic(a: &TradeFamily, b: &TradeFamily) -> bool {
    a.mu() == b.mu()
        && a.k() == b.k()
        && a.t() == b.t()
        && a.volume() == b.volume()
        && a.foundation().len() == b.foundation().len()
        && canonical_key(a) == canonical_key(b)
}
