//! Backtracking search for factorizations with prescribed class profiles.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Factorization;
use crate::error::{Error, Result};
use crate::graphs::{bit, bits, low_mask};

#[derive(Clone, Debug, Default)]
pub struct FactorSearchConfig {
    pub budget: Option<Duration>,
    /// Split on the first free choice and search the branches in parallel.
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorSearchOutcome {
    Found(Factorization),
    /// `exhausted`: the whole space was eliminated within budget.
    NotFound { exhausted: bool },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSearchStats {
    pub nodes: u64,
    pub branches: usize,
    pub elapsed_ms: u64,
}

/// Largest order handled.
pub const FACTOR_SEARCH_CAP: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctl {
    Found,
    Exhausted,
    Stopped,
}

#[derive(Clone)]
struct Solver<'a> {
    n: usize,
    /// Per class, `(size, count)` with sizes descending.
    kinds: Vec<Vec<(usize, usize)>>,
    prev_same: Vec<Option<usize>>,
    /// Bounds on the degree still owed to classes `c..`.
    suffix_min: Vec<usize>,
    suffix_max: Vec<usize>,
    avail: Vec<u64>,
    parts: Vec<Vec<u64>>,
    solution: Option<Vec<Vec<u64>>>,
    nodes: u64,
    deadline: Option<Instant>,
    stop: &'a AtomicBool,
}

fn part_key(parts: &[u64]) -> Vec<u64> {
    // Parts are created in order of their smallest vertex; compare by sorted vertex lists.
    parts.to_vec()
}

fn mask_lt(a: u64, b: u64) -> bool {
    // Lexicographic order on sorted vertex lists.
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return false,
            (true, false) => return true,
            (false, true) => return false,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x < y;
        }
        a &= a - 1;
        b &= b - 1;
    }
}

fn key_lt(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return mask_lt(*x, *y);
        }
    }
    a.len() < b.len()
}

impl Solver<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes & 0x3ff == 1 {
            if self.stop.load(Ordering::Relaxed) {
                return false;
            }
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                self.stop.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    fn remove_part(&mut self, m: u64) {
        for v in bits(m) {
            self.avail[v] &= !m;
        }
    }

    fn restore_part(&mut self, m: u64) {
        for v in bits(m) {
            self.avail[v] |= m & !bit(v);
        }
    }

    /// Continues class `c` with `free` vertices still to place.
    fn class(&mut self, c: usize, free: u64, counts: &mut Vec<usize>) -> Ctl {
        if !self.tick() {
            return Ctl::Stopped;
        }
        if free == 0 {
            return self.class_done(c);
        }
        let v = free.trailing_zeros() as usize;
        for kind in 0..self.kinds[c].len() {
            if counts[kind] == 0 {
                continue;
            }
            let s = self.kinds[c][kind].0;
            counts[kind] -= 1;
            let r = self.grow(c, free, counts, bit(v), s - 1, self.avail[v] & free);
            counts[kind] += 1;
            if r != Ctl::Exhausted {
                return r;
            }
        }
        Ctl::Exhausted
    }

    fn grow(&mut self, c: usize, free: u64, counts: &mut Vec<usize>, part: u64, need: usize, cand: u64) -> Ctl {
        if need == 0 {
            return self.place(c, free, counts, part);
        }
        if (cand.count_ones() as usize) < need {
            return Ctl::Exhausted;
        }
        for w in bits(cand) {
            let rest = cand & self.avail[w] & !low_mask(w + 1);
            match self.grow(c, free, counts, part | bit(w), need - 1, rest) {
                Ctl::Exhausted => {}
                other => return other,
            }
        }
        Ctl::Exhausted
    }

    fn place(&mut self, c: usize, free: u64, counts: &mut Vec<usize>, part: u64) -> Ctl {
        // Order among later classes of the same profile, decided by the first part when possible.
        if self.parts[c].is_empty() {
            if let Some(p) = self.prev_same[c] {
                if mask_lt(part, self.parts[p][0]) {
                    return Ctl::Exhausted;
                }
            }
        }
        let free = free & !part;
        if free != 0 {
            let min_s = self.kinds[c].iter().zip(counts.iter()).filter(|(_, &n)| n > 0).map(|(k, _)| k.0).min().unwrap();
            for x in bits(free) {
                if ((self.avail[x] & free & !part).count_ones() as usize) < min_s - 1 {
                    return Ctl::Exhausted;
                }
            }
        }
        self.remove_part(part);
        self.parts[c].push(part);
        let r = self.class(c, free, counts);
        self.parts[c].pop();
        self.restore_part(part);
        r
    }

    fn class_done(&mut self, c: usize) -> Ctl {
        if let Some(p) = self.prev_same[c] {
            let (a, b) = (part_key(&self.parts[p]), part_key(&self.parts[c]));
            if !key_lt(&a, &b) {
                return Ctl::Exhausted;
            }
        }
        let next = c + 1;
        for x in 0..self.n {
            let d = self.avail[x].count_ones() as usize;
            if d < self.suffix_min[next] || d > self.suffix_max[next] {
                return Ctl::Exhausted;
            }
        }
        if next == self.kinds.len() {
            self.solution = Some(self.parts.clone());
            return Ctl::Found;
        }
        let mut counts: Vec<usize> = self.kinds[next].iter().map(|k| k.1).collect();
        self.class(next, low_mask(self.n), &mut counts)
    }

    fn factorization(&self) -> Factorization {
        let factors = self
            .solution
            .as_ref()
            .unwrap_or(&self.parts)
            .iter()
            .map(|ps| {
                ps.iter()
                    .flat_map(|&m| {
                        let vs: Vec<usize> = bits(m).collect();
                        let mut e = Vec::new();
                        for (i, &a) in vs.iter().enumerate() {
                            e.extend(vs[i + 1..].iter().map(|&b| (a + 1, b + 1)));
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        Factorization::new(self.n, factors).expect("search output is a factorization")
    }
}

fn validate(n: usize, profiles: &[Vec<usize>]) -> Result<()> {
    if n == 0 || n > FACTOR_SEARCH_CAP {
        return Err(Error::TooLarge { what: "factorization search", n, cap: FACTOR_SEARCH_CAP });
    }
    if profiles.is_empty() {
        return Err(Error::BadProfiles("no classes".into()));
    }
    let mut edges = 0usize;
    for (i, p) in profiles.iter().enumerate() {
        if p.contains(&0) {
            return Err(Error::BadProfiles(format!("class {} has an empty part", i + 1)));
        }
        let s: usize = p.iter().sum();
        if s != n {
            return Err(Error::BadProfiles(format!("class {} parts sum to {s}, not {n}", i + 1)));
        }
        edges += p.iter().map(|&x| x * (x - 1) / 2).sum::<usize>();
    }
    let total = n * (n - 1) / 2;
    if edges != total {
        return Err(Error::BadProfiles(format!("profiles cover {edges} edges, K_{n} has {total}")));
    }
    Ok(())
}

/// Searches for a factorization of `K_n` whose class `i` has components of the
/// sizes in `profiles[i]`, each a clique.
///
/// Class 1 is fixed to consecutive blocks, larger parts first. Later classes with
/// equal profiles are kept in increasing order of their part lists.
pub fn factorization_search(
    n: usize,
    profiles: &[Vec<usize>],
    config: &FactorSearchConfig,
) -> Result<(FactorSearchOutcome, FactorSearchStats)> {
    validate(n, profiles)?;
    let start = Instant::now();
    let kinds: Vec<Vec<(usize, usize)>> = profiles
        .iter()
        .map(|p| {
            let mut s = p.clone();
            s.sort_unstable_by(|a, b| b.cmp(a));
            let mut out: Vec<(usize, usize)> = Vec::new();
            for x in s {
                match out.last_mut() {
                    Some((y, c)) if *y == x => *c += 1,
                    _ => out.push((x, 1)),
                }
            }
            out
        })
        .collect();
    let k = kinds.len();
    let prev_same: Vec<Option<usize>> =
        (0..k).map(|c| if c == 0 { None } else { (1..c).rev().find(|&p| kinds[p] == kinds[c]) }).collect();
    let mut suffix_min = vec![0; k + 1];
    let mut suffix_max = vec![0; k + 1];
    for c in (0..k).rev() {
        suffix_min[c] = suffix_min[c + 1] + kinds[c].last().unwrap().0 - 1;
        suffix_max[c] = suffix_max[c + 1] + kinds[c][0].0 - 1;
    }
    let stop = AtomicBool::new(false);
    let mut root = Solver {
        n,
        kinds: kinds.clone(),
        prev_same,
        suffix_min,
        suffix_max,
        avail: (0..n).map(|v| low_mask(n) & !bit(v)).collect(),
        parts: vec![Vec::new(); k],
        solution: None,
        nodes: 0,
        deadline: config.budget.map(|b| start + b),
        stop: &stop,
    };
    // Class 1: consecutive blocks.
    let mut next = 0;
    for &(s, cnt) in &kinds[0] {
        for _ in 0..cnt {
            let m = low_mask(next + s) & !low_mask(next);
            root.remove_part(m);
            root.parts[0].push(m);
            next += s;
        }
    }
    let finish = |outcome, nodes, branches| {
        Ok((outcome, FactorSearchStats { nodes, branches, elapsed_ms: start.elapsed().as_millis() as u64 }))
    };
    let degrees_ok = (0..n).all(|x| {
        let d = root.avail[x].count_ones() as usize;
        d >= root.suffix_min[1] && d <= root.suffix_max[1]
    });
    if !degrees_ok {
        return finish(FactorSearchOutcome::NotFound { exhausted: true }, 0, 0);
    }
    if k == 1 {
        return finish(FactorSearchOutcome::Found(root.factorization()), 0, 0);
    }

    // Branches: the part of vertex 0 in class 2.
    let mut branches: Vec<(usize, u64)> = Vec::new();
    for (kind, &(s, _)) in kinds[1].iter().enumerate() {
        let mut stack = vec![(bit(0), s - 1, root.avail[0])];
        while let Some((part, need, cand)) = stack.pop() {
            if need == 0 {
                branches.push((kind, part));
                continue;
            }
            for w in bits(cand).collect::<Vec<_>>().into_iter().rev() {
                stack.push((part | bit(w), need - 1, cand & root.avail[w] & !low_mask(w + 1)));
            }
        }
    }
    let run = |&(kind, part): &(usize, u64)| -> (Ctl, u64, Option<Factorization>) {
        let mut s = root.clone();
        let mut counts: Vec<usize> = s.kinds[1].iter().map(|k| k.1).collect();
        counts[kind] -= 1;
        let r = s.place(1, low_mask(n), &mut counts, part);
        let f = (r == Ctl::Found).then(|| s.factorization());
        (r, s.nodes, f)
    };
    let nb = branches.len();
    let mut nodes = 0;
    let mut exhausted = true;
    if config.parallel {
        let results: Vec<(Ctl, u64, Option<Factorization>)> = branches
            .par_iter()
            .map(|b| {
                if stop.load(Ordering::Relaxed) {
                    return (Ctl::Stopped, 0, None);
                }
                let r = run(b);
                if r.0 == Ctl::Found {
                    stop.store(true, Ordering::Relaxed);
                }
                r
            })
            .collect();
        let mut found = None;
        for (r, nd, f) in results {
            nodes += nd;
            match r {
                Ctl::Found => found = found.or(f),
                Ctl::Stopped => exhausted = false,
                Ctl::Exhausted => {}
            }
        }
        if let Some(f) = found {
            return finish(FactorSearchOutcome::Found(f), nodes, nb);
        }
    } else {
        for b in &branches {
            let (r, nd, f) = run(b);
            nodes += nd;
            match r {
                Ctl::Found => return finish(FactorSearchOutcome::Found(f.unwrap()), nodes, nb),
                Ctl::Stopped => {
                    exhausted = false;
                    break;
                }
                Ctl::Exhausted => {}
            }
        }
    }
    finish(FactorSearchOutcome::NotFound { exhausted }, nodes, nb)
}
