//! Constrained enumeration of small graphs, labeled or one per isomorphism class.
//!
//! Both modes walk the vertex pairs in colex order and add edges one at a time.
//! Every supported constraint is either closed under edge deletion (triangle-free,
//! K4-free, degree caps) or checked only at the leaves, so a violating partial
//! graph can be cut together with all of its extensions.
//!
//! The isomorphism-free mode is orderly generation: a graph is kept only when its
//! identity labeling is canonical (largest colex adjacency string), and children
//! only add pairs after the last edge. Deleting the last edge of a canonical
//! graph leaves a canonical graph, so every class is reached exactly once.

use super::{bit, canon::is_canonical, has_clique_of_size, low_mask, Graph};
use crate::error::{Error, Result};

/// Enumeration refuses orders above this.
pub const ENUMERATION_CAP: usize = 12;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphConstraints {
    /// Every vertex has exactly this degree.
    pub regular_degree: Option<usize>,
    pub triangle_free: bool,
    pub k4_free: bool,
    /// Some vertex has degree at most this.
    pub max_degree_of_some_vertex: Option<usize>,
    /// One representative per isomorphism class instead of every labeled graph.
    pub up_to_iso: bool,
}

fn pairs_colex(n: usize) -> Vec<(usize, usize)> {
    (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect()
}

struct Walker<'a, F> {
    n: usize,
    c: &'a GraphConstraints,
    pairs: Vec<(usize, usize)>,
    /// For each vertex, how many pairs at position >= p involve it.
    later: Vec<Vec<u8>>,
    adj: Vec<u64>,
    visit: F,
    count: u64,
}

impl<F: FnMut(&Graph)> Walker<'_, F> {
    fn new_edge_ok(&self, u: usize, v: usize) -> bool {
        if let Some(d) = self.c.regular_degree {
            if self.adj[u].count_ones() as usize > d || self.adj[v].count_ones() as usize > d {
                return false;
            }
        }
        let common = self.adj[u] & self.adj[v];
        if self.c.triangle_free && common != 0 {
            return false;
        }
        if self.c.k4_free && has_clique_of_size(&self.adj, common, 2) {
            return false;
        }
        if let Some(d) = self.c.max_degree_of_some_vertex {
            if self.adj.iter().all(|w| w.count_ones() as usize > d) {
                return false;
            }
        }
        true
    }

    /// Whether pairs from position `p` on can still complete every degree.
    fn degrees_reachable(&self, p: usize) -> bool {
        match self.c.regular_degree {
            None => true,
            Some(d) => (0..self.n).all(|v| {
                let have = self.adj[v].count_ones() as usize;
                have <= d && have + self.later[p][v] as usize >= d
            }),
        }
    }

    fn accept(&self) -> bool {
        match self.c.regular_degree {
            Some(d) => self.adj.iter().all(|w| w.count_ones() as usize == d),
            None => true,
        }
    }

    fn emit(&mut self) {
        if self.accept() {
            self.count += 1;
            let g = Graph::from_adjacency_unchecked(self.adj.clone());
            (self.visit)(&g);
        }
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        if on {
            self.adj[u] |= bit(v);
            self.adj[v] |= bit(u);
        } else {
            self.adj[u] &= !bit(v);
            self.adj[v] &= !bit(u);
        }
    }

    /// Labeled mode: decide pair `p` absent, then present.
    fn labeled(&mut self, p: usize) {
        if !self.degrees_reachable(p) {
            return;
        }
        if p == self.pairs.len() {
            self.emit();
            return;
        }
        self.labeled(p + 1);
        let (u, v) = self.pairs[p];
        self.set(u, v, true);
        if self.new_edge_ok(u, v) {
            self.labeled(p + 1);
        }
        self.set(u, v, false);
    }

    /// Orderly mode: the current graph is canonical and its last edge sits before `from`.
    fn orderly(&mut self, from: usize) {
        self.emit();
        for p in from..self.pairs.len() {
            let (u, v) = self.pairs[p];
            self.set(u, v, true);
            if self.new_edge_ok(u, v) && self.degrees_reachable(p + 1) {
                let g = Graph::from_adjacency_unchecked(self.adj.clone());
                if is_canonical(&g) {
                    self.orderly(p + 1);
                }
            }
            self.set(u, v, false);
        }
    }
}

/// Streams every graph on `n` vertices meeting `constraints` to `visit`;
/// returns how many were produced.
pub fn enumerate_graphs<F: FnMut(&Graph)>(n: usize, constraints: &GraphConstraints, visit: F) -> Result<u64> {
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge { what: "graph enumeration", n, cap: ENUMERATION_CAP });
    }
    let pairs = pairs_colex(n);
    let mut later = vec![vec![0u8; n]; pairs.len() + 1];
    for p in (0..pairs.len()).rev() {
        later[p] = later[p + 1].clone();
        later[p][pairs[p].0] += 1;
        later[p][pairs[p].1] += 1;
    }
    let mut w = Walker { n, c: constraints, pairs, later, adj: vec![0; n], visit, count: 0 };
    let empty_ok = constraints.max_degree_of_some_vertex.is_none() || n > 0;
    if empty_ok {
        if constraints.up_to_iso {
            if w.degrees_reachable(0) {
                w.orderly(0);
            }
        } else {
            w.labeled(0);
        }
    }
    debug_assert!(w.adj.iter().all(|&a| a & !low_mask(n) == 0));
    Ok(w.count)
}

pub fn collect_graphs(n: usize, constraints: &GraphConstraints) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    enumerate_graphs(n, constraints, |g| out.push(g.clone()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{automorphism_count, is_isomorphic};

    fn cubic(up_to_iso: bool) -> GraphConstraints {
        GraphConstraints { regular_degree: Some(3), up_to_iso, ..Default::default() }
    }

    #[test]
    fn unconstrained_labeled_counts() {
        for n in 0..=5usize {
            let count = enumerate_graphs(n, &GraphConstraints::default(), |_| {}).unwrap();
            assert_eq!(count, 1u64 << (n * n.saturating_sub(1) / 2));
        }
    }

    #[test]
    fn unlabeled_counts() {
        // 1, 1, 2, 4, 11, 34, 156 graphs on 0..=6 vertices.
        let iso = GraphConstraints { up_to_iso: true, ..Default::default() };
        let expect = [1u64, 1, 2, 4, 11, 34, 156];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(enumerate_graphs(n, &iso, |_| {}).unwrap(), e, "n={n}");
        }
    }

    #[test]
    fn cubic_on_four_is_k4() {
        let gs = collect_graphs(4, &cubic(true)).unwrap();
        assert_eq!(gs.len(), 1);
        assert!(is_isomorphic(&gs[0], &Graph::complete(4).unwrap()));
    }

    /// Orbit-counting oracle: labeled count = sum of n!/|Aut| over classes.
    #[test]
    fn cubic_classes_match_labeled_count() {
        for (n, labeled_expect) in [(4usize, 1u64), (6, 70), (8, 19355)] {
            let labeled = enumerate_graphs(n, &cubic(false), |_| {}).unwrap();
            assert_eq!(labeled, labeled_expect);
            let fact: u64 = (1..=n as u64).product();
            let classes = collect_graphs(n, &cubic(true)).unwrap();
            let total: u64 = classes.iter().map(|g| fact / automorphism_count(g)).sum();
            assert_eq!(total, labeled, "n={n}");
            for (i, a) in classes.iter().enumerate() {
                for b in &classes[i + 1..] {
                    assert!(!is_isomorphic(a, b));
                }
            }
        }
    }

    #[test]
    fn cubic_on_ten_has_21_classes() {
        let classes = collect_graphs(10, &cubic(true)).unwrap();
        assert_eq!(classes.len(), 21);
    }

    #[test]
    fn triangle_free_five_contains_c5() {
        let c = GraphConstraints { triangle_free: true, up_to_iso: true, ..Default::default() };
        let gs = collect_graphs(5, &c).unwrap();
        assert!(gs.iter().all(|g| !g.contains_triangle()));
        assert!(gs.iter().any(|g| is_isomorphic(g, &Graph::cycle(5).unwrap())));
        // 14 triangle-free graphs on 5 vertices.
        assert_eq!(gs.len(), 14);
    }

    #[test]
    fn some_vertex_degree_cap() {
        let c = GraphConstraints { max_degree_of_some_vertex: Some(0), ..Default::default() };
        // Graphs on 3 vertices with an isolated vertex: 8 - (paths and triangle) = 4.
        assert_eq!(enumerate_graphs(3, &c, |_| {}).unwrap(), 4);
    }

    #[test]
    fn refuses_large_orders() {
        assert!(matches!(
            enumerate_graphs(13, &GraphConstraints::default(), |_| {}),
            Err(Error::TooLarge { .. })
        ));
    }
}
