//! Exact decision procedures: backtracking for good colorings, exact values by
//! walking `n` upward, and exhaustive checks of small graph lemmas.
//!
//! The good-coloring search colors pairs in colex order. Four prunes apply:
//! - P1: an `m_i`-set whose last pair was just colored is independent in color `i`;
//! - P2: color `i` can no longer reach the edge count a good class needs;
//! - P3: some vertex has too many edges in a set of colors, using upper bounds
//!   from the bound engine on the reduced query;
//! - P4: colors with equal thresholds first appear in index order.

mod exact;
mod lemmas;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use exact::{exact_value, exact_value_with, ExactOutcome, ExactReport, SearchRun, WitnessCache};
pub use lemmas::{
    check_kfree_lemma, check_memo_lemma, decide_via_ramsey_pairs, KfreeReport, MemoReport, RAMSEY_PAIRS_CAP,
};

use crate::bounds::{Certificate, Engine, Query};
use crate::colorings::{pairs, EdgeColoring};
use crate::error::{Error, Result};
use crate::graphs::{bit, has_clique_of_size, low_mask, MAX_VERTICES};
use crate::turan::tbar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exists {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Color assignments tried.
    pub nodes: u64,
    pub prune_p1: u64,
    pub prune_p2: u64,
    pub prune_p3: u64,
    /// Colors skipped by symmetry breaking.
    pub prune_p4: u64,
    /// Nodes spent in sub-searches that tightened degree caps.
    pub cap_nodes: u64,
    pub elapsed_ms: u64,
}

impl SearchStats {
    fn absorb(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.prune_p1 += o.prune_p1;
        self.prune_p2 += o.prune_p2;
        self.prune_p3 += o.prune_p3;
        self.prune_p4 += o.prune_p4;
        self.cap_nodes += o.cap_nodes;
    }
}

/// Prefixes of the top `split_depth` pairs already searched without success.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResumeState {
    pub n: usize,
    pub query: Query,
    pub split_depth: usize,
    /// 0-based colors of the first `split_depth` pairs, colex order.
    pub eliminated: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub exists: Exists,
    /// Present exactly when `exists` is `Yes`.
    pub witness: Option<EdgeColoring>,
    pub stats: SearchStats,
    /// Present exactly when `exists` is `Undecided`.
    pub resume: Option<ResumeState>,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub p4: bool,
    /// Largest color subset used by P3.
    pub p3_max_subset: usize,
    /// Tighten P3 caps by searching the reduced queries when the engine is not sharp.
    pub refine_caps: bool,
    /// Worker threads; 0 means the rayon default.
    pub threads: usize,
    /// Single-threaded, prefixes in order: the witness is the least one in colex order.
    pub deterministic: bool,
    /// Pairs colored before work is split into independent prefixes.
    pub split_depth: usize,
    /// Bounds used by P3; the built-in engine when absent.
    pub engine: Option<Arc<Engine>>,
    pub resume: Option<ResumeState>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            p1: true,
            p2: true,
            p3: true,
            p4: true,
            p3_max_subset: 2,
            refine_caps: true,
            threads: 0,
            deterministic: false,
            split_depth: 8,
            engine: None,
            resume: None,
        }
    }
}

impl SearchConfig {
    pub fn deterministic() -> Self {
        SearchConfig { deterministic: true, threads: 1, ..Self::default() }
    }

    /// No prunes at all: plain enumeration with a final check.
    pub fn unpruned() -> Self {
        SearchConfig { p1: false, p2: false, p3: false, p4: false, refine_caps: false, ..Self::deterministic() }
    }
}

/// Decides whether some `k`-coloring of `K_n` has `alpha_i <= m_i - 1` for every color.
pub fn exists_good_coloring(
    n: usize,
    q: &Query,
    budget: Option<Duration>,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    let mut engine = cfg.engine.as_deref().cloned().unwrap_or_else(Engine::builtin);
    let deadline = budget.map(|b| Instant::now() + b);
    search_with(n, q, deadline, cfg, &mut engine)
}

/// Search with a caller-owned engine; upper bounds found while tightening caps
/// are registered in it.
pub(crate) fn search_with(
    n: usize,
    q: &Query,
    deadline: Option<Instant>,
    cfg: &SearchConfig,
    engine: &mut Engine,
) -> Result<SearchOutcome> {
    let start = Instant::now();
    if n == 0 {
        return Err(Error::BadArgs("the order must be at least 1".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::TooLarge { what: "good-coloring search", n, cap: MAX_VERTICES });
    }
    if q.k() > 64 {
        return Err(Error::TooLarge { what: "good-coloring search colors", n: q.k(), cap: 64 });
    }
    if let Some(r) = &cfg.resume {
        if r.n != n || &r.query != q {
            return Err(Error::BadArgs(format!("resume state is for n={} and {}, not n={n} and {q}", r.n, r.query)));
        }
    }
    let mut stats = SearchStats::default();
    let done = |exists, witness, mut stats: SearchStats, resume| {
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        Ok(SearchOutcome { exists, witness, stats, resume })
    };
    if q.min() == 1 {
        return done(Exists::No, None, stats, None);
    }
    let problem = Problem::new(n, q, deadline, cfg, engine, &mut stats)?;
    let Some(problem) = problem else {
        let resume = ResumeState { n, query: q.clone(), split_depth: 0, eliminated: Vec::new() };
        return done(Exists::Undecided, None, stats, Some(resume));
    };

    let depth = cfg.resume.as_ref().map_or(cfg.split_depth, |r| r.split_depth).min(problem.pairs.len());
    let mut root = Worker::new(&problem, deadline, None);
    let mut prefixes = Vec::new();
    root.collect_prefixes(0, depth, &mut prefixes);
    stats.absorb(&root.stats);
    if root.timed_out {
        let resume = ResumeState { n, query: q.clone(), split_depth: depth, eliminated: Vec::new() };
        return done(Exists::Undecided, None, stats, Some(resume));
    }
    let skip: std::collections::HashSet<Vec<u8>> =
        cfg.resume.iter().flat_map(|r| r.eliminated.iter().cloned()).collect();
    let todo: Vec<Vec<u8>> = prefixes.into_iter().filter(|p| !skip.contains(p)).collect();

    let found = AtomicBool::new(false);
    let run = |prefix: &Vec<u8>| -> PrefixResult {
        let mut w = Worker::new(&problem, deadline, Some(&found));
        let hit = w.run_prefix(prefix);
        if hit {
            found.store(true, Ordering::Relaxed);
        }
        PrefixResult {
            solution: hit.then(|| w.colors.clone()),
            complete: !w.timed_out && !w.cancelled,
            stats: w.stats,
        }
    };
    let results: Vec<PrefixResult> = if cfg.deterministic || cfg.threads == 1 {
        let mut out = Vec::with_capacity(todo.len());
        for p in &todo {
            let r = run(p);
            let stop = r.solution.is_some() || !r.complete;
            out.push(r);
            if stop {
                break;
            }
        }
        out
    } else if cfg.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::BadArgs(format!("thread pool: {e}")))?;
        pool.install(|| todo.par_iter().map(run).collect())
    } else {
        todo.par_iter().map(run).collect()
    };

    for r in &results {
        stats.absorb(&r.stats);
    }
    if let Some(colors) = results.iter().find_map(|r| r.solution.clone()) {
        let f = EdgeColoring::from_ranked(n, problem.k, colors);
        let alpha = f.alpha_vector();
        if alpha.iter().zip(&problem.m).any(|(&a, &m)| a >= m) {
            return Err(Error::InvalidColoring(format!("search produced alpha {alpha:?} for {q}")));
        }
        return done(Exists::Yes, Some(f), stats, None);
    }
    let all_complete = results.len() == todo.len() && results.iter().all(|r| r.complete);
    if all_complete {
        return done(Exists::No, None, stats, None);
    }
    let mut eliminated: Vec<Vec<u8>> = skip.into_iter().collect();
    eliminated.extend(todo.iter().zip(&results).filter(|(_, r)| r.complete).map(|(p, _)| p.clone()));
    eliminated.sort();
    let resume = ResumeState { n, query: q.clone(), split_depth: depth, eliminated };
    done(Exists::Undecided, None, stats, Some(resume))
}

struct PrefixResult {
    solution: Option<Vec<u8>>,
    complete: bool,
    stats: SearchStats,
}

/// Read-only data shared by all workers.
struct Problem {
    n: usize,
    k: usize,
    m: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    p1: bool,
    /// P2: least edge count of each good color class (0 when off).
    need: Vec<u32>,
    /// P3: `(color mask, cap)` for the subsets containing each color.
    caps: Vec<Vec<(u64, u32)>>,
    /// Every P3 subset once, for the remaining-degree lookahead.
    all_caps: Vec<(u64, u32)>,
    /// P4: the previous color with the same threshold.
    prev_same: Vec<Option<usize>>,
}

impl Problem {
    /// `None` when the deadline passed while tightening caps.
    fn new(
        n: usize,
        q: &Query,
        deadline: Option<Instant>,
        cfg: &SearchConfig,
        engine: &mut Engine,
        stats: &mut SearchStats,
    ) -> Result<Option<Self>> {
        let k = q.k();
        let m: Vec<usize> = q.thresholds().iter().map(|&x| x as usize).collect();
        let need = m
            .iter()
            .map(|&mi| if cfg.p2 { tbar(n as u64, mi as u64 - 1).unwrap() as u32 } else { 0 })
            .collect();
        let prev_same = (0..k).map(|c| (cfg.p4 && c > 0 && m[c - 1] == m[c]).then(|| c - 1)).collect();
        let mut caps = vec![Vec::new(); k];
        let mut all_caps = Vec::new();
        if cfg.p3 && k >= 2 {
            for mask in 1u64..(1u64 << k) - 1 {
                let size = mask.count_ones() as usize;
                if size > cfg.p3_max_subset {
                    continue;
                }
                let reduced: Vec<u32> = (0..k).map(|j| q.thresholds()[j] - u32::from(mask & bit(j) == 0)).collect();
                let rq = Query::new(reduced)?;
                let Some(hi) = upper_bound(&rq, n, deadline, cfg, engine, stats)? else {
                    return Ok(None);
                };
                let Some(hi) = hi else { continue };
                let cap = hi.saturating_sub(1);
                if (cap as usize) < n - 1 {
                    all_caps.push((mask, cap));
                    for c in 0..k {
                        if mask & bit(c) != 0 {
                            caps[c].push((mask, cap));
                        }
                    }
                }
            }
        }
        Ok(Some(Problem { n, k, m, pairs: pairs(n).collect(), p1: cfg.p1, need, caps, all_caps, prev_same }))
    }
}

/// Engine upper bound on `R̄(rq)`, tightened by search below `n` when allowed.
/// Outer `None` means the deadline passed.
fn upper_bound(
    rq: &Query,
    n: usize,
    deadline: Option<Instant>,
    cfg: &SearchConfig,
    engine: &mut Engine,
    stats: &mut SearchStats,
) -> Result<Option<Option<u32>>> {
    let b = engine.bound(rq);
    let mut hi = b.hi;
    if !cfg.refine_caps || rq.min() == 1 {
        return Ok(Some(hi));
    }
    let top = hi.map_or(n as u32, |h| h.min(n as u32));
    for h in b.lo.max(1)..top {
        let sub = SearchConfig { resume: None, ..cfg.clone() };
        let out = search_with(h as usize, rq, deadline, &sub, engine)?;
        stats.cap_nodes += out.stats.nodes + out.stats.cap_nodes;
        match out.exists {
            Exists::No => {
                engine.certificates.add(Certificate::upper(format!("search n={h} {rq}"), rq.clone(), h, "search"));
                hi = Some(h);
                break;
            }
            Exists::Yes => {
                engine.certificates.add(Certificate::lower(format!("search n={h} {rq}"), rq.clone(), h, "search"));
            }
            Exists::Undecided => return Ok(None),
        }
    }
    Ok(Some(hi))
}

fn mask_sum(d: &[u32], mask: u64) -> u32 {
    let mut sum = 0;
    let mut w = mask;
    while w != 0 {
        sum += d[w.trailing_zeros() as usize];
        w &= w - 1;
    }
    sum
}

struct Worker<'a> {
    p: &'a Problem,
    /// `adj[c * n + x]`: neighbors of `x` in color `c`.
    adj: Vec<u64>,
    /// `other[c * n + x]`: neighbors of `x` along colored pairs not of color `c`.
    other: Vec<u64>,
    /// `deg[x * k + c]`.
    deg: Vec<u32>,
    count: Vec<u32>,
    used: u64,
    colors: Vec<u8>,
    stats: SearchStats,
    deadline: Option<Instant>,
    stop: Option<&'a AtomicBool>,
    timed_out: bool,
    cancelled: bool,
}

enum Verdict {
    Ok,
    P1,
    P2,
    P3,
}

impl<'a> Worker<'a> {
    fn new(p: &'a Problem, deadline: Option<Instant>, stop: Option<&'a AtomicBool>) -> Self {
        let (n, k) = (p.n, p.k);
        Worker {
            p,
            adj: vec![0; n * k],
            other: vec![0; n * k],
            deg: vec![0; n * k],
            count: vec![0; k],
            used: 0,
            colors: Vec::with_capacity(p.pairs.len()),
            stats: SearchStats::default(),
            deadline,
            stop,
            timed_out: false,
            cancelled: false,
        }
    }

    fn assign(&mut self, c: usize) -> u64 {
        let (n, k) = (self.p.n, self.p.k);
        let (u, v) = self.p.pairs[self.colors.len()];
        self.adj[c * n + u] |= bit(v);
        self.adj[c * n + v] |= bit(u);
        for i in (0..k).filter(|&i| i != c) {
            self.other[i * n + u] |= bit(v);
            self.other[i * n + v] |= bit(u);
        }
        self.deg[u * k + c] += 1;
        self.deg[v * k + c] += 1;
        self.count[c] += 1;
        let before = self.used;
        self.used |= bit(c);
        self.colors.push(c as u8);
        before
    }

    fn undo(&mut self, used_before: u64) {
        let (n, k) = (self.p.n, self.p.k);
        let c = self.colors.pop().unwrap() as usize;
        let (u, v) = self.p.pairs[self.colors.len()];
        self.adj[c * n + u] &= !bit(v);
        self.adj[c * n + v] &= !bit(u);
        for i in (0..k).filter(|&i| i != c) {
            self.other[i * n + u] &= !bit(v);
            self.other[i * n + v] &= !bit(u);
        }
        self.deg[u * k + c] -= 1;
        self.deg[v * k + c] -= 1;
        self.count[c] -= 1;
        self.used = used_before;
    }

    /// Checks the pair just colored.
    fn check(&self, c: usize) -> Verdict {
        let (n, k) = (self.p.n, self.p.k);
        let placed = self.colors.len();
        let (u, v) = self.p.pairs[placed - 1];
        for x in [u, v] {
            let d = &self.deg[x * k..(x + 1) * k];
            for &(mask, cap) in &self.p.caps[c] {
                if mask_sum(d, mask) > cap {
                    return Verdict::P3;
                }
            }
            if !self.p.all_caps.is_empty() && !self.degrees_completable(d) {
                return Verdict::P3;
            }
        }
        let remaining = (self.p.pairs.len() - placed) as u32;
        if self.count.iter().zip(&self.p.need).any(|(&have, &need)| have + remaining < need) {
            return Verdict::P2;
        }
        if self.p.p1 {
            for i in (0..k).filter(|&i| i != c) {
                let mi = self.p.m[i];
                let other = &self.other[i * n..(i + 1) * n];
                let cand = low_mask(u) & other[u] & other[v];
                if has_clique_of_size(other, cand, mi - 2) {
                    return Verdict::P1;
                }
            }
        }
        Verdict::Ok
    }

    /// Whether the colors at one vertex can still be completed to final degrees
    /// meeting every cap: each color is bounded by the caps given the others'
    /// current degrees, and the colors outside each capped set must absorb the rest.
    fn degrees_completable(&self, d: &[u32]) -> bool {
        let k = self.p.k;
        let total = self.p.n as i64 - 1;
        let used: i64 = d.iter().map(|&x| x as i64).sum();
        let mut up = [0i64; 64];
        for j in 0..k {
            up[j] = d[j] as i64 + total - used;
        }
        for &(mask, cap) in &self.p.all_caps {
            let s = mask_sum(d, mask) as i64;
            let mut w = mask;
            while w != 0 {
                let j = w.trailing_zeros() as usize;
                up[j] = up[j].min(cap as i64 - (s - d[j] as i64));
                w &= w - 1;
            }
        }
        self.p.all_caps.iter().all(|&(mask, cap)| {
            let outside: i64 = (0..k).filter(|&j| mask & bit(j) == 0).map(|j| up[j]).sum();
            outside >= total - cap as i64
        })
    }

    fn leaf_ok(&self) -> bool {
        if self.p.p1 {
            return true;
        }
        let f = EdgeColoring::from_ranked(self.p.n, self.p.k, self.colors.clone());
        f.alpha_vector().iter().zip(&self.p.m).all(|(&a, &m)| a < m)
    }

    fn allowed(&mut self, c: usize) -> bool {
        match self.p.prev_same[c] {
            Some(j) if self.used & bit(j) == 0 => {
                self.stats.prune_p4 += 1;
                false
            }
            _ => true,
        }
    }

    fn tick(&mut self) -> bool {
        self.stats.nodes += 1;
        if self.stats.nodes & 0x3ff == 1 {
            if self.stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
                self.cancelled = true;
            }
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                self.timed_out = true;
            }
        }
        !(self.timed_out || self.cancelled)
    }

    /// Tries color `c` on the next pair; `true` if the subtree may continue.
    fn try_color(&mut self, c: usize) -> Option<u64> {
        let before = self.assign(c);
        match self.check(c) {
            Verdict::Ok => Some(before),
            v => {
                match v {
                    Verdict::P1 => self.stats.prune_p1 += 1,
                    Verdict::P2 => self.stats.prune_p2 += 1,
                    _ => self.stats.prune_p3 += 1,
                }
                self.undo(before);
                None
            }
        }
    }

    fn collect_prefixes(&mut self, at: usize, depth: usize, out: &mut Vec<Vec<u8>>) {
        if at == depth {
            out.push(self.colors.clone());
            return;
        }
        for c in 0..self.p.k {
            if !self.allowed(c) || !self.tick() {
                if self.timed_out {
                    return;
                }
                continue;
            }
            if let Some(before) = self.try_color(c) {
                self.collect_prefixes(at + 1, depth, out);
                self.undo(before);
            }
        }
    }

    fn run_prefix(&mut self, prefix: &[u8]) -> bool {
        for &c in prefix {
            self.assign(c as usize);
        }
        self.dfs()
    }

    fn dfs(&mut self) -> bool {
        if self.colors.len() == self.p.pairs.len() {
            return self.leaf_ok();
        }
        for c in 0..self.p.k {
            if !self.allowed(c) {
                continue;
            }
            if !self.tick() {
                return false;
            }
            if let Some(before) = self.try_color(c) {
                if self.dfs() {
                    return true;
                }
                self.undo(before);
                if self.timed_out || self.cancelled {
                    return false;
                }
            }
        }
        false
    }
}
