//! Bounded backtracking search for μ-way trades.
//!
//! The first collection `T1` is built as a lexicographically nondecreasing
//! block sequence; with [`SymmetryBreaking::ElementOrder`] new elements enter
//! as consecutive ids. Every complete `T1` is then matched by exact covers of
//! its `t`-subset coverage, and `μ - 1` pairwise disjoint covers give the
//! remaining collections.
//!
//! The search fans out over short `T1` prefixes. With the `parallel` feature
//! the prefixes run on rayon workers; results are merged by prefix index, so
//! outcomes and statistics do not depend on the thread count.

mod cover;

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_key, CanonKey};
use crate::error::{Error, Result};
use crate::model::{Element, TradeFamily};
use crate::verify::{for_each_subset, verify};
use cover::{disjoint_choices, CoverProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Stop at the first family found.
    FirstWitness,
    /// Enumerate all families and return one canonical form per class.
    CountClasses,
    /// Like first-witness, but intended as a non-existence certificate:
    /// requires an explicit foundation bound.
    ExhaustiveNone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryBreaking {
    /// Any element may appear anywhere.
    None,
    /// Element `n + 1` appears only after element `n`.
    #[default]
    ElementOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchProblem {
    pub mu: usize,
    pub k: usize,
    pub t: usize,
    pub m: usize,
    pub steiner: bool,
    /// Upper bound on the foundation size; defaults to [`foundation_bound`].
    #[serde(default)]
    pub max_foundation: Option<usize>,
    /// Lower bound on the foundation size.
    #[serde(default)]
    pub min_foundation: Option<usize>,
    pub mode: SearchMode,
    #[serde(default)]
    pub symmetry: SymmetryBreaking,
    #[serde(default)]
    pub node_limit: Option<u64>,
    #[serde(default)]
    pub time_limit_ms: Option<u64>,
    /// Worker threads; `Some(1)` runs sequentially. Not part of the result.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl SearchProblem {
    pub fn new(mu: usize, k: usize, t: usize, m: usize, steiner: bool, mode: SearchMode) -> Self {
        SearchProblem {
            mu,
            k,
            t,
            m,
            steiner,
            max_foundation: None,
            min_foundation: None,
            mode,
            symmetry: SymmetryBreaking::ElementOrder,
            node_limit: None,
            time_limit_ms: None,
            threads: None,
        }
    }

    pub fn with_max_foundation(mut self, v: usize) -> Self {
        self.max_foundation = Some(v);
        self
    }

    pub fn with_min_foundation(mut self, v: usize) -> Self {
        self.min_foundation = Some(v);
        self
    }

    pub fn with_symmetry(mut self, s: SymmetryBreaking) -> Self {
        self.symmetry = s;
        self
    }

    pub fn with_node_limit(mut self, n: u64) -> Self {
        self.node_limit = Some(n);
        self
    }

    pub fn with_threads(mut self, n: usize) -> Self {
        self.threads = Some(n);
        self
    }

    fn effective_max(&self) -> usize {
        self.max_foundation.unwrap_or_else(|| foundation_bound(self.m, self.k, self.t))
    }

    fn effective_min(&self) -> usize {
        self.min_foundation.unwrap_or((self.k + 1).min(self.effective_max()))
    }

    fn validate(&self) -> Result<()> {
        if self.mu < 2 {
            return Err(Error::param("mu must be at least 2"));
        }
        if self.t == 0 || self.t >= self.k {
            return Err(Error::param(format!("need 1 <= t < k, got t = {}, k = {}", self.t, self.k)));
        }
        if self.t > 7 {
            return Err(Error::param("t above 7 is not supported"));
        }
        if self.m == 0 {
            return Err(Error::param("volume must be positive"));
        }
        if self.mode == SearchMode::ExhaustiveNone && self.max_foundation.is_none() {
            return Err(Error::param("exhaustive-none needs an explicit max_foundation"));
        }
        let max = self.effective_max();
        if max < self.k {
            return Err(Error::param(format!("max_foundation {max} is below k = {}", self.k)));
        }
        if max > 255 {
            return Err(Error::param("max_foundation above 255 is not supported"));
        }
        if self.effective_min() > max {
            return Err(Error::param("min_foundation exceeds max_foundation"));
        }
        Ok(())
    }
}

/// Largest foundation a μ-way `(v, k, t)` trade of volume `m` can have.
///
/// For `t >= 2` every foundation element lies in at least two blocks of each
/// collection (its derived trade would otherwise have volume 1), so the `k·m`
/// incidences of a collection cover at most `⌊k·m/2⌋` elements. For `t = 1`
/// an element may lie in a single block and the bound is `k·m`. The result
/// is never below `k + 1`, the smallest foundation of any trade.
pub fn foundation_bound(m: usize, k: usize, t: usize) -> usize {
    let b = if t >= 2 { k * m / 2 } else { k * m };
    b.max(k + 1)
}

fn bound_argument(k: usize, t: usize, m: usize) -> String {
    let b = foundation_bound(m, k, t);
    if t >= 2 {
        format!(
            "every foundation element has replication at least 2 (no trade of volume 1 exists, so no derived trade \
             of volume 1 exists); a collection has k*m = {} incidences, so |found| <= max(floor(k*m/2), k+1) = {b}",
            k * m
        )
    } else {
        format!("a collection has k*m = {} incidences, so |found| <= max(k*m, k+1) = {b}", k * m)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Prefixes handed to workers.
    pub prefixes: u64,
    /// Block placements tried while building the first collection.
    pub t1_nodes: u64,
    /// First collections that passed every local check.
    pub t1_complete: u64,
    /// Exact cover nodes.
    pub cover_nodes: u64,
    /// Exact covers found.
    pub covers: u64,
    /// Complete families assembled.
    pub families: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.prefixes += o.prefixes;
        self.t1_nodes += o.t1_nodes;
        self.t1_complete += o.t1_complete;
        self.cover_nodes += o.cover_nodes;
        self.covers += o.covers;
        self.families += o.families;
    }

    pub fn nodes(&self) -> u64 {
        self.t1_nodes + self.cover_nodes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchStatus {
    WitnessFound { witness: TradeFamily },
    ExhaustedNone,
    ExhaustedClasses { classes: Vec<TradeFamily> },
    Aborted { reason: String },
}

impl SearchStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SearchStatus::WitnessFound { .. } => "witness-found",
            SearchStatus::ExhaustedNone => "exhausted-none",
            SearchStatus::ExhaustedClasses { .. } => "exhausted-classes",
            SearchStatus::Aborted { .. } => "aborted",
        }
    }
}

/// Machine-readable record of what a search run establishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub generator: String,
    pub problem: SearchProblem,
    pub min_foundation: usize,
    pub max_foundation: usize,
    pub foundation_bound: usize,
    pub bound_argument: String,
    pub claim: String,
    pub status: String,
    pub stats: SearchStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TradeFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    #[serde(flatten)]
    pub status: SearchStatus,
    pub stats: SearchStats,
    pub certificate: Certificate,
}

/// Limits and cross-worker signals.
pub(crate) struct Shared {
    nodes: AtomicU64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    aborted: AtomicBool,
    /// Smallest prefix index holding a witness.
    best: AtomicUsize,
}

impl Shared {
    pub(crate) fn new(node_limit: Option<u64>, deadline: Option<Instant>) -> Self {
        Shared { nodes: AtomicU64::new(0), node_limit, deadline, aborted: AtomicBool::new(false), best: AtomicUsize::new(usize::MAX) }
    }
}

/// Per-worker node counter; flushes to [`Shared`] in batches.
pub(crate) struct Ticker<'a> {
    shared: &'a Shared,
    index: usize,
    pending: u64,
    batch: u64,
    t1: u64,
    cover: u64,
}

impl<'a> Ticker<'a> {
    pub(crate) fn new(shared: &'a Shared, index: usize) -> Self {
        let batch = match shared.node_limit {
            Some(l) if l < 1 << 20 => 1,
            _ => 1024,
        };
        Ticker { shared, index, pending: 0, batch, t1: 0, cover: 0 }
    }

    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= self.batch {
            self.flush();
        }
        !self.shared.aborted.load(Relaxed) && self.shared.best.load(Relaxed) >= self.index
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.pending, Relaxed) + self.pending;
        self.pending = 0;
        let over = self.shared.node_limit.is_some_and(|l| total > l);
        if over || self.shared.deadline.is_some_and(|d| Instant::now() >= d) {
            self.shared.aborted.store(true, Relaxed);
        }
    }

    fn tick_t1(&mut self) -> bool {
        self.t1 += 1;
        self.tick()
    }

    pub(crate) fn tick_cover(&mut self) -> bool {
        self.cover += 1;
        self.tick()
    }
}

fn subset_key(s: &[Element]) -> u64 {
    s.iter().fold(0u64, |acc, &x| (acc << 8) | (x as u64 + 1))
}

/// Partial first collection.
#[derive(Clone)]
struct T1State {
    blocks: Vec<Vec<Element>>,
    r: Vec<u32>,
    distinct: usize,
    used: HashSet<u64>,
}

struct Engine<'a> {
    p: &'a SearchProblem,
    max_found: usize,
    min_found: usize,
    rmin: u32,
    /// Replication `m - 1` is impossible when `t >= 2`: the blocks avoiding
    /// the element would form a trade of volume 1.
    forbid_last: bool,
    ordered: bool,
}

impl<'a> Engine<'a> {
    fn new(p: &'a SearchProblem) -> Self {
        Engine {
            p,
            max_found: p.effective_max(),
            min_found: p.effective_min(),
            rmin: if p.t >= 2 { 2 } else { 1 },
            forbid_last: p.t >= 2,
            ordered: p.symmetry == SymmetryBreaking::ElementOrder,
        }
    }

    fn empty_state(&self) -> T1State {
        T1State { blocks: Vec::with_capacity(self.p.m), r: vec![0; self.max_found], distinct: 0, used: HashSet::new() }
    }

    fn final_ok(&self, r: u32) -> bool {
        r == 0 || (r >= self.rmin && !(self.forbid_last && r as usize + 1 == self.p.m))
    }

    /// Candidate next blocks, ascending.
    fn next_blocks(&self, st: &T1State) -> Vec<Vec<Element>> {
        let k = self.p.k;
        let limit = if self.ordered { (st.distinct + k).min(self.max_found) } else { self.max_found };
        let mut out = Vec::new();
        let prev = st.blocks.last().cloned();
        let mut cur = Vec::with_capacity(k);
        self.gen(st, limit, prev.as_deref(), &mut cur, prev.is_some(), &mut out);
        out
    }

    fn gen(&self, st: &T1State, limit: usize, prev: Option<&[Element]>, cur: &mut Vec<Element>, tight: bool, out: &mut Vec<Vec<Element>>) {
        let k = self.p.k;
        let pos = cur.len();
        if pos == k {
            out.push(cur.clone());
            return;
        }
        let mut lo = cur.last().map_or(0, |&x| x as usize + 1);
        if tight {
            lo = lo.max(prev.expect("tight implies a previous block")[pos] as usize);
        }
        for x in lo..limit {
            if limit - x < k - pos {
                break;
            }
            if self.ordered && x >= st.distinct {
                let fresh_so_far = cur.iter().filter(|&&y| y as usize >= st.distinct).count();
                if x != st.distinct + fresh_so_far {
                    break;
                }
            }
            cur.push(x as Element);
            let still = tight && prev.is_some_and(|p| p[pos] as usize == x);
            self.gen(st, limit, prev, cur, still, out);
            cur.pop();
        }
    }

    /// Places `block`; returns the previous distinct count, or `None` (with
    /// `st` unchanged) on a Steiner conflict.
    fn place(&self, st: &mut T1State, block: &[Element]) -> Option<usize> {
        if self.p.steiner {
            let mut clash = false;
            for_each_subset(block, self.p.t, |s| clash |= st.used.contains(&subset_key(s)));
            if clash {
                return None;
            }
            for_each_subset(block, self.p.t, |s| {
                st.used.insert(subset_key(s));
            });
        }
        let before = st.distinct;
        for &x in block {
            if st.r[x as usize] == 0 {
                st.distinct += 1;
            }
            st.r[x as usize] += 1;
        }
        st.blocks.push(block.to_vec());
        Some(before)
    }

    fn unplace(&self, st: &mut T1State, before: usize) {
        let block = st.blocks.pop().expect("placed block");
        for &x in &block {
            st.r[x as usize] -= 1;
        }
        st.distinct = before;
        if self.p.steiner {
            for_each_subset(&block, self.p.t, |s| {
                st.used.remove(&subset_key(s));
            });
        }
    }

    /// Checks after placing the last block of `st`, whose previous first
    /// element was `prev_first`.
    fn consistent(&self, st: &T1State, prev_first: Element) -> bool {
        let first = st.blocks.last().expect("nonempty")[0];
        // Elements below the current first element never recur.
        if !(prev_first..first).all(|x| self.final_ok(st.r[x as usize])) {
            return false;
        }
        let remaining = (self.p.m - st.blocks.len()) as u32;
        let mut deficit = 0u32;
        for &r in &st.r[first as usize..] {
            if r > 0 && r < self.rmin {
                if self.rmin - r > remaining {
                    return false;
                }
                deficit += self.rmin - r;
            }
        }
        let fresh = self.min_found.saturating_sub(st.distinct) as u32;
        deficit + fresh * self.rmin <= remaining * self.p.k as u32
    }

    fn complete_ok(&self, st: &T1State) -> bool {
        let first = st.blocks.last().map_or(0, |b| b[0]) as usize;
        st.distinct >= self.min_found && st.r[first..].iter().all(|&r| self.final_ok(r))
    }
}

struct Worker<'a> {
    eng: &'a Engine<'a>,
    ticker: Ticker<'a>,
    stats: SearchStats,
    witness: Option<TradeFamily>,
    classes: BTreeMap<CanonKey, TradeFamily>,
    error: Option<Error>,
}

impl<'a> Worker<'a> {
    fn dfs(&mut self, st: &mut T1State) -> bool {
        if st.blocks.len() == self.eng.p.m {
            return self.complete(st);
        }
        let prev_first = st.blocks.last().map_or(0, |b| b[0]);
        for b in self.eng.next_blocks(st) {
            if !self.ticker.tick_t1() {
                return false;
            }
            let Some(before) = self.eng.place(st, &b) else { continue };
            let cont = if self.eng.consistent(st, prev_first) { self.dfs(st) } else { true };
            self.eng.unplace(st, before);
            if !cont {
                return false;
            }
        }
        true
    }

    /// Matches a complete first collection with disjoint exact covers.
    fn complete(&mut self, st: &T1State) -> bool {
        let p = self.eng.p;
        if !self.eng.complete_ok(st) {
            return true;
        }
        self.stats.t1_complete += 1;
        let mut demand: BTreeMap<Vec<Element>, usize> = BTreeMap::new();
        for b in &st.blocks {
            for_each_subset(b, p.t, |s| *demand.entry(s.to_vec()).or_insert(0) += 1);
        }
        let foundation: Vec<Element> = (0..self.eng.max_found).filter(|&x| st.r[x] > 0).map(|x| x as Element).collect();
        let exclude: HashSet<Vec<Element>> = st.blocks.iter().cloned().collect();
        let cp = CoverProblem::new(&demand, &foundation, p.k, p.t, &exclude);
        let mut covers = Vec::new();
        if !cp.solve(p.m, &mut self.ticker, &mut covers) {
            return false;
        }
        self.stats.covers += covers.len() as u64;
        if covers.len() + 1 < p.mu {
            return true;
        }
        disjoint_choices(&covers, p.mu - 1, &mut |choice| {
            let mut cols = vec![st.blocks.clone()];
            cols.extend(choice.iter().map(|&c| covers[c].iter().map(|&b| cp.blocks[b].clone()).collect()));
            let family = match TradeFamily::from_raw(p.k, p.t, cols) {
                Ok(f) => f,
                Err(e) => {
                    self.error = Some(e);
                    return false;
                }
            };
            self.stats.families += 1;
            match p.mode {
                SearchMode::CountClasses => {
                    self.classes.entry(canonical_key(&family)).or_insert_with(|| canonical_form(&family));
                    true
                }
                SearchMode::FirstWitness | SearchMode::ExhaustiveNone => {
                    self.witness = Some(family);
                    self.ticker.shared.best.fetch_min(self.ticker.index, Relaxed);
                    false
                }
            }
        })
    }
}

struct PrefixResult {
    stats: SearchStats,
    witness: Option<TradeFamily>,
    classes: BTreeMap<CanonKey, TradeFamily>,
    error: Option<Error>,
}

fn collect_prefixes(eng: &Engine<'_>, st: &mut T1State, depth: usize, ticker: &mut Ticker<'_>, out: &mut Vec<T1State>) {
    if st.blocks.len() == depth {
        out.push(st.clone());
        return;
    }
    let prev_first = st.blocks.last().map_or(0, |b| b[0]);
    for b in eng.next_blocks(st) {
        ticker.tick_t1();
        let Some(before) = eng.place(st, &b) else { continue };
        if eng.consistent(st, prev_first) {
            collect_prefixes(eng, st, depth, ticker, out);
        }
        eng.unplace(st, before);
    }
}

fn run_prefix(eng: &Engine<'_>, shared: &Shared, index: usize, prefix: &T1State) -> PrefixResult {
    let mut w = Worker {
        eng,
        ticker: Ticker::new(shared, index),
        stats: SearchStats { prefixes: 1, ..Default::default() },
        witness: None,
        classes: BTreeMap::new(),
        error: None,
    };
    if shared.best.load(Relaxed) >= index {
        w.dfs(&mut prefix.clone());
    }
    w.ticker.flush();
    w.stats.t1_nodes = w.ticker.t1;
    w.stats.cover_nodes = w.ticker.cover;
    PrefixResult { stats: w.stats, witness: w.witness, classes: w.classes, error: w.error }
}

fn run_all(eng: &Engine<'_>, shared: &Shared, prefixes: &[T1State]) -> Vec<PrefixResult> {
    #[cfg(feature = "parallel")]
    if eng.p.threads != Some(1) {
        use rayon::prelude::*;
        let work = || prefixes.par_iter().enumerate().map(|(i, st)| run_prefix(eng, shared, i, st)).collect::<Vec<_>>();
        return match eng.p.threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(work),
                Err(_) => work(),
            },
            None => work(),
        };
    }
    prefixes.iter().enumerate().map(|(i, st)| run_prefix(eng, shared, i, st)).collect()
}

/// Depth of the prefixes handed to workers.
const FAN_OUT_DEPTH: usize = 3;

/// Runs a search. Witnesses are re-verified before they are returned.
pub fn search(problem: &SearchProblem) -> Result<SearchOutcome> {
    problem.validate()?;
    let start = Instant::now();
    let eng = Engine::new(problem);
    let shared = Shared::new(problem.node_limit, problem.time_limit_ms.map(|ms| start + Duration::from_millis(ms)));

    let mut prefixes = Vec::new();
    let mut stats = SearchStats::default();
    {
        let mut ticker = Ticker::new(&shared, 0);
        collect_prefixes(&eng, &mut eng.empty_state(), FAN_OUT_DEPTH.min(problem.m), &mut ticker, &mut prefixes);
        ticker.flush();
        stats.t1_nodes = ticker.t1;
    }
    let results = if shared.aborted.load(Relaxed) { Vec::new() } else { run_all(&eng, &shared, &prefixes) };
    let aborted = shared.aborted.load(Relaxed);

    if let Some(e) = results.iter().find_map(|r| r.error.as_ref()) {
        return Err(Error::Inconsistency(format!("search assembled an invalid family: {e}")));
    }
    let winner = results.iter().position(|r| r.witness.is_some());
    let counted = winner.map_or(results.len(), |w| w + 1);
    let mut classes = BTreeMap::new();
    for r in &results[..counted] {
        stats.add(&r.stats);
        for (key, f) in &r.classes {
            classes.entry(key.clone()).or_insert_with(|| f.clone());
        }
    }
    stats.elapsed = start.elapsed();

    let status = if let Some(w) = winner {
        let witness = results[w].witness.clone().expect("winner has a witness");
        let report = verify(&witness);
        if !report.valid || (problem.steiner && !report.steiner) {
            return Err(Error::Inconsistency(format!("search produced a family that fails verification: {report:?}")));
        }
        SearchStatus::WitnessFound { witness }
    } else if aborted {
        let reason = match (problem.node_limit, problem.time_limit_ms) {
            (Some(n), _) if shared.nodes.load(Relaxed) > n => format!("node limit {n} exceeded"),
            (_, Some(ms)) => format!("time limit {ms} ms exceeded"),
            _ => "limit exceeded".to_string(),
        };
        SearchStatus::Aborted { reason }
    } else if problem.mode == SearchMode::CountClasses {
        SearchStatus::ExhaustedClasses { classes: classes.into_values().collect() }
    } else {
        SearchStatus::ExhaustedNone
    };
    let certificate = certify(problem, &eng, &status, &stats);
    Ok(SearchOutcome { status, stats, certificate })
}

fn describe(p: &SearchProblem) -> String {
    format!("{}-way (v,{},{}) {}trade of volume {}", p.mu, p.k, p.t, if p.steiner { "Steiner " } else { "" }, p.m)
}

fn certify(p: &SearchProblem, eng: &Engine<'_>, status: &SearchStatus, stats: &SearchStats) -> Certificate {
    let bound = foundation_bound(p.m, p.k, p.t);
    let unconditional = eng.min_found <= p.k + 1 && eng.max_found >= bound;
    let range = format!("foundation size in [{}, {}]", eng.min_found, eng.max_found);
    let what = describe(p);
    let claim = match status {
        SearchStatus::WitnessFound { witness } => {
            format!("a {what} exists; the attached witness on {} points passes verification", witness.foundation().len())
        }
        SearchStatus::ExhaustedNone if unconditional => {
            format!("no {what} exists: the search covered every {range}, and the bound admits no larger foundation")
        }
        SearchStatus::ExhaustedNone => format!("no {what} with {range} exists"),
        SearchStatus::ExhaustedClasses { classes } if unconditional => {
            format!("isomorphism classes of {what}: exactly {} (all foundations covered)", classes.len())
        }
        SearchStatus::ExhaustedClasses { classes } => {
            format!("isomorphism classes of {what} with {range}: exactly {}", classes.len())
        }
        SearchStatus::Aborted { reason } => format!("no claim: the search stopped early ({reason})"),
    };
    Certificate {
        generator: format!("tradekit {}", env!("CARGO_PKG_VERSION")),
        problem: p.clone(),
        min_foundation: eng.min_found,
        max_foundation: eng.max_found,
        foundation_bound: bound,
        bound_argument: bound_argument(p.k, p.t, p.m),
        claim,
        status: status.name().to_string(),
        stats: stats.clone(),
        witness: match status {
            SearchStatus::WitnessFound { witness } => Some(witness.clone()),
            _ => None,
        },
        class_count: match status {
            SearchStatus::ExhaustedClasses { classes } => Some(classes.len()),
            _ => None,
        },
    }
}

/// Finds a 3-way `(v, k, 2)` Steiner trade of the given volume, trying
/// foundation sizes in ascending order; returns the successful outcome.
///
/// Exhausting every size up to [`foundation_bound`] is reported as an
/// [`Error::Inconsistency`].
pub fn mine_base_traced(volume: usize, k: usize, threads: Option<usize>) -> Result<SearchOutcome> {
    if k < 3 || volume < 2 {
        return Err(Error::param("mine_base needs k >= 3 and volume >= 2"));
    }
    let bound = foundation_bound(volume, k, 2);
    for v in k + 1..=bound {
        let mut p = SearchProblem::new(3, k, 2, volume, true, SearchMode::FirstWitness).with_max_foundation(v).with_min_foundation(v);
        p.threads = threads;
        let out = search(&p)?;
        match &out.status {
            SearchStatus::WitnessFound { .. } => return Ok(out),
            SearchStatus::ExhaustedNone => continue,
            other => return Err(Error::Inconsistency(format!("unexpected status {} at foundation {v}", other.name()))),
        }
    }
    Err(Error::Inconsistency(format!(
        "no 3-way (v,{k},2) Steiner trade of volume {volume} on at most {bound} points"
    )))
}

pub fn mine_base(volume: usize, k: usize) -> Result<TradeFamily> {
    match mine_base_traced(volume, k, None)?.status {
        SearchStatus::WitnessFound { witness } => Ok(witness),
        _ => unreachable!("mine_base_traced returns only witnesses"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(foundation_bound(7, 3, 2), 10);
        assert_eq!(foundation_bound(6, 3, 2), 9);
        assert_eq!(foundation_bound(2, 2, 1), 4);
        assert_eq!(foundation_bound(1, 3, 2), 4);
        assert_eq!(foundation_bound(6, 4, 2), 12);
    }

    #[test]
    fn rejects_bad_problems() {
        let p = SearchProblem::new(3, 3, 2, 4, false, SearchMode::ExhaustiveNone);
        assert!(search(&p).is_err());
        let p = SearchProblem::new(3, 3, 3, 4, false, SearchMode::FirstWitness);
        assert!(search(&p).is_err());
        let p = SearchProblem::new(3, 3, 2, 4, false, SearchMode::FirstWitness).with_max_foundation(2);
        assert!(search(&p).is_err());
    }

    #[test]
    fn next_blocks_introduce_elements_in_order() {
        let p = SearchProblem::new(3, 2, 1, 3, false, SearchMode::FirstWitness).with_max_foundation(6);
        let eng = Engine::new(&p);
        let mut st = eng.empty_state();
        assert_eq!(eng.next_blocks(&st), vec![vec![0, 1]]);
        eng.place(&mut st, &[0, 1]);
        assert_eq!(eng.next_blocks(&st), vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 3]]);
    }

    #[test]
    fn volume_two_pairs() {
        let p = SearchProblem::new(3, 2, 1, 2, false, SearchMode::CountClasses).with_max_foundation(4);
        let out = search(&p).unwrap();
        let SearchStatus::ExhaustedClasses { classes } = &out.status else { panic!("{:?}", out.status) };
        assert_eq!(classes.len(), 1);
        assert_eq!(out.certificate.class_count, Some(1));
    }

    #[test]
    fn node_limit_aborts() {
        let p = SearchProblem::new(3, 3, 2, 6, true, SearchMode::CountClasses).with_max_foundation(9).with_node_limit(50);
        let out = search(&p).unwrap();
        assert_eq!(out.status.name(), "aborted");
        assert!(out.certificate.claim.starts_with("no claim"));
    }

    #[test]
    fn small_volume_has_no_trade() {
        let p = SearchProblem::new(3, 3, 2, 4, false, SearchMode::ExhaustiveNone).with_max_foundation(6);
        assert_eq!(search(&p).unwrap().status, SearchStatus::ExhaustedNone);
    }
}
