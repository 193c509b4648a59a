//! The fixpoint engine.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::provenance::{ext_value, low_value};
use super::{
    CertificateKind, CertificateRegistry, Conclusion, Interval, ColorPartition, Premise, ProvenanceStep, Query,
    RamseyTable, Rule,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// All partitions are tried up to this `k`; beyond it only the all-singleton one.
    pub full_partition_max_k: usize,
    /// Largest `n` tried by the edge-count rule.
    pub ext_cap: u32,
    /// Upper limit on the number of queries considered in one run.
    pub universe_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { full_partition_max_k: 6, ext_cap: 512, universe_cap: 20_000 }
    }
}

/// A user-supplied value `R(H; k)` bounding `R̄(m; k)` from above.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhEntry {
    pub m: u32,
    pub k: usize,
    pub value: u32,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Debug, Default)]
pub struct Engine {
    pub table: RamseyTable,
    pub certificates: CertificateRegistry,
    pub rh: Vec<RhEntry>,
    pub config: EngineConfig,
}

/// Final interval for one query, with the steps that justify it (premises first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub query: Query,
    pub lo: u32,
    pub hi: Option<u32>,
    pub provenance: Vec<ProvenanceStep>,
}

impl Bound {
    pub fn interval(&self) -> Interval {
        Interval { lo: self.lo, hi: self.hi }
    }

    pub fn is_exact(&self) -> bool {
        self.hi == Some(self.lo)
    }
}

#[derive(Clone, Debug)]
struct Node {
    interval: Interval,
    steps: Vec<ProvenanceStep>,
}

/// Every query touched by one engine run, with its full step history.
#[derive(Clone, Debug)]
pub struct Derivation {
    queries: Vec<Query>,
    index: HashMap<Query, usize>,
    nodes: Vec<Node>,
    pub passes: usize,
    /// Queries whose inputs drove `lo` above `hi`.
    pub conflicts: Vec<Query>,
}

impl Derivation {
    pub fn interval(&self, q: &Query) -> Option<Interval> {
        self.index.get(q).map(|&i| self.nodes[i].interval)
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn steps(&self) -> impl Iterator<Item = &ProvenanceStep> {
        self.nodes.iter().flat_map(|n| n.steps.iter())
    }

    pub fn solved(&self) -> HashMap<Query, Interval> {
        self.queries.iter().cloned().zip(self.nodes.iter().map(|n| n.interval)).collect()
    }

    /// The steps behind the final interval of `q`, premises before conclusions.
    pub fn bound(&self, q: &Query) -> Option<Bound> {
        let &i = self.index.get(q)?;
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let node = &self.nodes[i];
        if let Some(s) = self.step_for(i, Conclusion::Lo(node.interval.lo)) {
            self.collect(s, &mut out, &mut seen);
        }
        if let Some(h) = node.interval.hi {
            if let Some(s) = self.step_for(i, Conclusion::Hi(h)) {
                self.collect(s, &mut out, &mut seen);
            }
        }
        Some(Bound { query: q.clone(), lo: node.interval.lo, hi: node.interval.hi, provenance: out })
    }

    fn step_for(&self, i: usize, c: Conclusion) -> Option<&ProvenanceStep> {
        self.nodes[i].steps.iter().find(|s| s.conclusion == c)
    }

    fn collect<'a>(&'a self, s: &'a ProvenanceStep, out: &mut Vec<ProvenanceStep>, seen: &mut HashSet<(Query, Conclusion)>) {
        if !seen.insert((s.query.clone(), s.conclusion)) {
            return;
        }
        for p in &s.premises {
            let Premise::Query { query, interval } = p else { continue };
            let Some(&j) = self.index.get(query) else { continue };
            let is_lo = matches!(s.conclusion, Conclusion::Lo(_));
            // A lower bound by the drop rule from a smaller query also rests on its hi.
            let uses_hi = !is_lo || (s.rule == Rule::Drop && query.k() < s.query.k());
            if is_lo {
                if let Some(ps) = self.step_for(j, Conclusion::Lo(interval.lo)) {
                    self.collect(ps, out, seen);
                }
            }
            if let (true, Some(h)) = (uses_hi, interval.hi) {
                if let Some(ps) = self.step_for(j, Conclusion::Hi(h)) {
                    self.collect(ps, out, seen);
                }
            }
        }
        out.push(s.clone());
    }
}

fn choose2(m: u32) -> u64 {
    m as u64 * (m as u64).saturating_sub(1) / 2
}

/// Result of one step candidate: a conclusion and how it was reached.
struct Candidate {
    conclusion: Conclusion,
    rule: Rule,
    premises: Vec<Premise>,
    partition: Option<ColorPartition>,
}

struct Links {
    /// `(node, dropped value)` for each query one color smaller.
    drop_down: Vec<(usize, u32)>,
    /// Queries one color larger that reduce to this one.
    drop_up: Vec<usize>,
    mono_below: Vec<usize>,
    mono_above: Vec<usize>,
    parts: Vec<(ColorPartition, Vec<Option<usize>>)>,
}

impl Engine {
    pub fn new(table: RamseyTable, certificates: CertificateRegistry) -> Self {
        Engine { table, certificates, rh: Vec::new(), config: EngineConfig::default() }
    }

    /// Built-in table and certificates.
    pub fn builtin() -> Self {
        Engine::new(RamseyTable::builtin(), CertificateRegistry::builtin())
    }

    pub fn bound(&self, q: &Query) -> Bound {
        self.derive(std::slice::from_ref(q)).bound(q).expect("target is in the universe")
    }

    fn locally_exact(&self, q: &Query) -> bool {
        let k = q.k();
        if q.min() == 1 || k == 1 || (k >= 2 && q.min() == 2) {
            return true;
        }
        if k == 2 && self.table.get(q.thresholds()[0], q.thresholds()[1]).is_some_and(|e| e.interval.is_exact()) {
            return true;
        }
        if let Some(m) = q.uniform_value() {
            if k as u64 > choose2(m) {
                return true;
            }
        }
        self.certificates.for_query(q).into_iter().any(|c| matches!(c.kind, CertificateKind::Exact { .. }))
    }

    fn partitions_for(&self, q: &Query) -> Vec<(ColorPartition, Vec<Vec<u32>>)> {
        let ps = if q.k() <= self.config.full_partition_max_k {
            ColorPartition::all(q.k())
        } else {
            vec![ColorPartition::singletons(q.k()).expect("k >= 2")]
        };
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for p in ps {
            let subs = p.sub_thresholds(q).expect("thresholds >= 2");
            let mut key: Vec<Vec<u32>> = subs
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.sort_unstable_by(|a, b| b.cmp(a));
                    s
                })
                .collect();
            key.sort();
            if seen.insert(key) {
                out.push((p, subs));
            }
        }
        out
    }

    fn universe(&self, targets: &[Query]) -> BTreeSet<Query> {
        let mut uni: BTreeSet<Query> = targets.iter().cloned().collect();
        let mut queue: VecDeque<Query> = targets.iter().cloned().collect();
        while let Some(q) = queue.pop_front() {
            if self.locally_exact(&q) {
                continue;
            }
            let mut next: Vec<Query> = (0..q.k()).filter_map(|i| q.without(i)).collect();
            for (_, subs) in self.partitions_for(&q) {
                next.extend(subs.into_iter().filter(|s| !s.contains(&1)).map(|s| Query::new(s).unwrap()));
            }
            for n in next {
                if uni.len() >= self.config.universe_cap {
                    break;
                }
                if uni.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        for c in self.certificates.iter() {
            uni.insert(c.query.clone());
        }
        uni
    }

    fn local_candidates(&self, q: &Query) -> Vec<Candidate> {
        let mut out = Vec::new();
        let m = q.thresholds();
        let k = q.k();
        let plain = |rule, c| Candidate { conclusion: c, rule, premises: Vec::new(), partition: None };
        if q.min() == 1 {
            out.push(plain(Rule::One, Conclusion::Lo(1)));
            out.push(plain(Rule::One, Conclusion::Hi(1)));
            return out;
        }
        if k == 1 {
            out.push(plain(Rule::K1, Conclusion::Lo(m[0])));
        }
        if k >= 2 && q.min() == 2 {
            let v = Query::min(&q.without(k - 1).unwrap());
            out.push(plain(Rule::Min, Conclusion::Lo(v)));
            out.push(plain(Rule::Min, Conclusion::Hi(v)));
        }
        if let Some(v) = q.uniform_value() {
            let (lo, hi) = low_value(v, k);
            out.push(plain(Rule::Low, Conclusion::Lo(lo)));
            if let Some(h) = hi {
                out.push(plain(Rule::Low, Conclusion::Hi(h)));
            }
            if let Some(n) = ext_value(v, k, self.config.ext_cap) {
                out.push(plain(Rule::Ext, Conclusion::Hi(n)));
            }
            for e in self.rh.iter().filter(|e| e.m == v && e.k == k) {
                out.push(Candidate {
                    conclusion: Conclusion::Hi(e.value),
                    rule: Rule::Rh,
                    premises: vec![Premise::Side { query: q.clone(), value: e.value }],
                    partition: None,
                });
            }
        }
        out.push(plain(Rule::Base, Conclusion::Lo(q.min())));
        if k == 2 {
            if let Some(e) = self.table.get(m[1], m[0]) {
                let prem = Premise::Table { a: m[1], b: m[0], interval: e.interval, source: e.source.clone() };
                out.push(Candidate {
                    conclusion: Conclusion::Lo(e.interval.lo),
                    rule: Rule::Two,
                    premises: vec![prem.clone()],
                    partition: None,
                });
                if let Some(h) = e.interval.hi {
                    out.push(Candidate { conclusion: Conclusion::Hi(h), rule: Rule::Two, premises: vec![prem], partition: None });
                }
            }
        }
        for c in self.certificates.for_query(q) {
            let prem = Premise::certificate(&c.id, &c.query, c.kind);
            let (lo, hi) = match c.kind {
                CertificateKind::Lower { n } => (Some(n + 1), None),
                CertificateKind::Upper { n } => (None, Some(n)),
                CertificateKind::Exact { value } => (Some(value), Some(value)),
            };
            if let Some(l) = lo {
                out.push(Candidate { conclusion: Conclusion::Lo(l), rule: Rule::Cert, premises: vec![prem.clone()], partition: None });
            }
            if let Some(h) = hi {
                out.push(Candidate { conclusion: Conclusion::Hi(h), rule: Rule::Cert, premises: vec![prem], partition: None });
            }
        }
        out
    }

    fn links(&self, queries: &[Query], index: &HashMap<Query, usize>) -> Vec<Links> {
        let mut links: Vec<Links> = queries
            .iter()
            .map(|_| Links { drop_down: Vec::new(), drop_up: Vec::new(), mono_below: Vec::new(), mono_above: Vec::new(), parts: Vec::new() })
            .collect();
        let mut by_k: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, q) in queries.iter().enumerate() {
            by_k.entry(q.k()).or_default().push(i);
        }
        for (i, q) in queries.iter().enumerate() {
            let mut seen = HashSet::new();
            for pos in 0..q.k() {
                let x = q.thresholds()[pos];
                if !seen.insert(x) {
                    continue;
                }
                if let Some(&j) = q.without(pos).and_then(|p| index.get(&p)) {
                    links[i].drop_down.push((j, x));
                    links[j].drop_up.push(i);
                }
            }
            for &j in &by_k[&q.k()] {
                if j == i {
                    continue;
                }
                if queries[j].dominated_by(q) {
                    links[i].mono_below.push(j);
                } else if q.dominated_by(&queries[j]) {
                    links[i].mono_above.push(j);
                }
            }
            if !self.locally_exact(q) && q.k() >= 2 {
                for (p, subs) in self.partitions_for(q) {
                    let ids: Option<Vec<Option<usize>>> = subs
                        .into_iter()
                        .map(|s| {
                            if s.contains(&1) {
                                Some(None)
                            } else {
                                index.get(&Query::new(s).unwrap()).map(|&j| Some(j))
                            }
                        })
                        .collect();
                    if let Some(ids) = ids {
                        links[i].parts.push((p, ids));
                    }
                }
            }
        }
        links
    }

    /// Runs every rule to a fixpoint over the queries reachable from `targets`.
    pub fn derive(&self, targets: &[Query]) -> Derivation {
        let queries: Vec<Query> = self.universe(targets).into_iter().collect();
        let index: HashMap<Query, usize> = queries.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
        let links = self.links(&queries, &index);
        let mut nodes: Vec<Node> = queries.iter().map(|_| Node { interval: Interval::unbounded(1), steps: Vec::new() }).collect();
        let mut conflicts = Vec::new();

        let apply = |node: &mut Node, q: &Query, c: Candidate| -> bool {
            let better = match c.conclusion {
                Conclusion::Lo(v) => v > node.interval.lo,
                Conclusion::Hi(v) => node.interval.hi.is_none_or(|h| v < h),
            };
            if better {
                match c.conclusion {
                    Conclusion::Lo(v) => node.interval.lo = v,
                    Conclusion::Hi(v) => node.interval.hi = Some(v),
                }
                node.steps.push(ProvenanceStep {
                    rule: c.rule,
                    query: q.clone(),
                    conclusion: c.conclusion,
                    premises: c.premises,
                    partition: c.partition,
                });
            }
            better
        };

        for (i, q) in queries.iter().enumerate() {
            for c in self.local_candidates(q) {
                apply(&mut nodes[i], q, c);
            }
        }

        let mut passes = 0;
        loop {
            passes += 1;
            let mut changed = false;
            for (i, q) in queries.iter().enumerate() {
                let mut cands = Vec::new();
                let prem = |j: usize, nodes: &[Node]| Premise::Query { query: queries[j].clone(), interval: nodes[j].interval };
                let single = |rule, c, p| Candidate { conclusion: c, rule, premises: vec![p], partition: None };
                for &j in &links[i].mono_below {
                    cands.push(single(Rule::Mono, Conclusion::Lo(nodes[j].interval.lo), prem(j, &nodes)));
                }
                for &j in &links[i].mono_above {
                    if let Some(h) = nodes[j].interval.hi {
                        cands.push(single(Rule::Mono, Conclusion::Hi(h), prem(j, &nodes)));
                    }
                }
                for &(j, x) in &links[i].drop_down {
                    if let Some(h) = nodes[j].interval.hi {
                        cands.push(single(Rule::Drop, Conclusion::Hi(h), prem(j, &nodes)));
                        if x >= h {
                            cands.push(single(Rule::Drop, Conclusion::Lo(nodes[j].interval.lo), prem(j, &nodes)));
                        }
                    }
                }
                for &j in &links[i].drop_up {
                    cands.push(single(Rule::Drop, Conclusion::Lo(nodes[j].interval.lo), prem(j, &nodes)));
                }
                for (p, ids) in &links[i].parts {
                    let mut sum = 0u32;
                    let mut premises = Vec::with_capacity(ids.len());
                    let subs = p.sub_thresholds(q).unwrap();
                    let mut ok = true;
                    for (id, sub) in ids.iter().zip(subs) {
                        match id {
                            None => {
                                sum += 1;
                                premises.push(Premise::Query { query: Query::new(sub).unwrap(), interval: Interval::exact(1) });
                            }
                            Some(j) => match nodes[*j].interval.hi {
                                Some(h) => {
                                    sum += h;
                                    premises.push(prem(*j, &nodes));
                                }
                                None => {
                                    ok = false;
                                    break;
                                }
                            },
                        }
                    }
                    if ok {
                        cands.push(Candidate {
                            conclusion: Conclusion::Hi(sum + 2 - p.t() as u32),
                            rule: Rule::Part,
                            premises,
                            partition: Some(p.clone()),
                        });
                    }
                }
                let best_lo = cands
                    .iter()
                    .enumerate()
                    .filter_map(|(n, c)| match c.conclusion {
                        Conclusion::Lo(v) => Some((v, std::cmp::Reverse(n))),
                        _ => None,
                    })
                    .max()
                    .map(|(_, std::cmp::Reverse(n))| n);
                let best_hi = cands
                    .iter()
                    .enumerate()
                    .filter_map(|(n, c)| match c.conclusion {
                        Conclusion::Hi(v) => Some((v, n)),
                        _ => None,
                    })
                    .min()
                    .map(|(_, n)| n);
                let mut chosen: Vec<Candidate> = Vec::new();
                for (n, c) in cands.into_iter().enumerate() {
                    if Some(n) == best_lo || Some(n) == best_hi {
                        chosen.push(c);
                    }
                }
                for c in chosen {
                    changed |= apply(&mut nodes[i], q, c);
                }
            }
            if !changed {
                break;
            }
        }
        for (i, q) in queries.iter().enumerate() {
            if nodes[i].interval.hi.is_some_and(|h| h < nodes[i].interval.lo) {
                conflicts.push(q.clone());
            }
        }
        Derivation { queries, index, nodes, passes, conflicts }
    }
}

/// `bound` with a fresh engine over the given inputs.
pub fn bound(q: &Query, table: &RamseyTable, certificates: &CertificateRegistry) -> Bound {
    Engine::new(table.clone(), certificates.clone()).bound(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Certificate;
    use proptest::prelude::*;

    fn q(v: &[u32]) -> Query {
        Query::new(v.to_vec()).unwrap()
    }

    fn iv(b: &Bound) -> (u32, Option<u32>) {
        (b.lo, b.hi)
    }

    #[test]
    fn examples() {
        let e = Engine::builtin();
        assert_eq!(iv(&e.bound(&q(&[3, 3]))), (6, Some(6)));
        assert_eq!(iv(&e.bound(&q(&[6, 3, 3]))), (6, Some(6)));
        assert_eq!(e.bound(&q(&[7, 4, 3])).hi, Some(9));
        assert_eq!(iv(&e.bound(&q(&[4, 4, 4, 4, 4, 4, 4]))), (4, Some(4)));
        assert_eq!(iv(&e.bound(&Query::uniform(5, 8).unwrap())), (6, Some(6)));
        assert_eq!(iv(&e.bound(&q(&[9, 9, 2]))), (9, Some(9)));
        assert_eq!(iv(&e.bound(&q(&[9, 2, 2]))), (2, Some(2)));
        assert_eq!(iv(&e.bound(&q(&[9, 1]))), (1, Some(1)));
        assert_eq!(iv(&e.bound(&q(&[5]))), (6, None));
    }

    #[test]
    fn drop_equality_is_recorded() {
        let b = Engine::builtin().bound(&q(&[6, 3, 3]));
        let lo = b.provenance.iter().find(|s| s.query == q(&[6, 3, 3]) && s.conclusion == Conclusion::Lo(6)).unwrap();
        assert_eq!(lo.rule, Rule::Drop);
        assert!(b.provenance.iter().any(|s| s.rule == Rule::Two));
    }

    #[test]
    fn three_fours() {
        // Built-ins alone.
        let e = Engine::builtin();
        let b = e.bound(&q(&[4, 4, 4]));
        assert_eq!(b.lo, 10);
        assert!(b.hi.unwrap() <= 15, "{:?}", b.hi);
        // With R̄(4,3,3) = 5 available, the singleton partition gives 14.
        let mut certs = CertificateRegistry::builtin();
        certs.add(Certificate::exact("t", q(&[4, 3, 3]), 5, "search"));
        let e = Engine::new(RamseyTable::builtin(), certs);
        let d = e.derive(&[q(&[4, 4, 4])]);
        let b = d.bound(&q(&[4, 4, 4])).unwrap();
        assert_eq!(b.lo, 10);
        assert!(b.hi.unwrap() <= 14);
        let solved = d.solved();
        let single = ColorPartition::singletons(3).unwrap();
        assert_eq!(crate::bounds::partition_bound(&q(&[4, 4, 4]), &single, &solved).unwrap(), 14);
    }

    #[test]
    fn uniform_rows() {
        let e = Engine::builtin();
        assert_eq!(iv(&e.bound(&Query::uniform(4, 6).unwrap())), (5, Some(5)));
        assert_eq!(iv(&e.bound(&Query::uniform(4, 7).unwrap())), (4, Some(4)));
        for k in 8..=10 {
            assert_eq!(iv(&e.bound(&Query::uniform(5, k).unwrap())), (6, Some(6)), "k={k}");
        }
        for k in 11..=15 {
            assert_eq!(iv(&e.bound(&Query::uniform(6, k).unwrap())), (7, Some(7)), "k={k}");
        }
        assert_eq!(iv(&e.bound(&Query::uniform(6, 8).unwrap())), (11, Some(11)));
        assert_eq!(iv(&e.bound(&Query::uniform(6, 10).unwrap())), (8, Some(8)));
    }

    #[test]
    fn every_step_replays() {
        let e = Engine::builtin();
        let targets: Vec<Query> =
            [vec![4, 4, 4], vec![7, 4, 3], vec![6, 6, 6], vec![5, 5, 4, 3], vec![6, 3, 3]].into_iter().map(|v| q(&v)).collect();
        let d = e.derive(&targets);
        let mut n = 0;
        for s in d.steps() {
            assert!(s.replays(), "{s}");
            n += 1;
        }
        assert!(n > 50);
        assert!(d.conflicts.is_empty());
        for t in &targets {
            for s in d.bound(t).unwrap().provenance {
                assert!(s.replays(), "{s}");
            }
        }
    }

    #[test]
    fn json_output() {
        let b = Engine::builtin().bound(&q(&[7, 4, 3]));
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["lo"], 9);
        assert_eq!(v["hi"], 9);
        let text = v.to_string();
        assert!(text.contains("R-two") && text.contains("R-drop"), "{text}");
        let back: Bound = serde_json::from_value(v).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn more_inputs_never_widen() {
        let base = Engine::new(RamseyTable::builtin(), CertificateRegistry::new());
        let full = Engine::builtin();
        for t in [vec![4, 4, 4], vec![5, 4, 3], vec![6, 6], vec![4, 4, 4, 4], vec![5, 5, 5]] {
            let a = base.bound(&q(&t)).interval();
            let b = full.bound(&q(&t)).interval();
            assert!(b.within(&a), "{t:?}: {a} vs {b}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn permutation_invariance(mut m in proptest::collection::vec(2u32..6, 1..4), seed in any::<u64>()) {
            let e = Engine::builtin();
            let a = e.bound(&Query::new(m.clone()).unwrap());
            let r = seed as usize;
            let len = m.len();
            m.rotate_left(r % len);
            let b = e.bound(&Query::new(m).unwrap());
            prop_assert_eq!(a, b);
        }
    }
}
