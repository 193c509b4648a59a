//! Simple graphs on at most 64 vertices, stored as one adjacency word per vertex.
//!
//! Vertices are `1..=n` at every public boundary (constructors, edge lists, JSON)
//! and `0..n` inside the bitsets.

mod canon;
mod clique;
mod enumerate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canon::{automorphism_count, canonical_form, is_canonical, is_isomorphic, CanonicalForm};
pub use clique::{has_clique_of_size, max_clique_size};
pub use enumerate::{collect_graphs, enumerate_graphs, GraphConstraints, ENUMERATION_CAP};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the set bits of a word, lowest first.
pub(crate) fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let v = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(v)
        }
    })
}

/// An undirected simple graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "graphs", n, cap: MAX_VERTICES });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        let all = low_mask(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    /// The cycle 1-2-...-n-1 (n >= 3).
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::BadArgs(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        let edges: Vec<(usize, usize)> = (1..=n).map(|v| (v, v % n + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Builds a graph from 1-based edges. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from 0-based adjacency words, checking symmetry and loops.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "graphs", n, cap: MAX_VERTICES });
        }
        let mask = low_mask(n);
        for (v, &row) in adj.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::InvalidGraph(format!("vertex {} has neighbors beyond {n}", v + 1)));
            }
            if row & bit(v) != 0 {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", v + 1)));
            }
            for w in bits(row) {
                if adj[w] & bit(v) == 0 {
                    return Err(Error::InvalidGraph(format!(
                        "adjacency is not symmetric at {{{},{}}}",
                        v + 1,
                        w + 1
                    )));
                }
            }
        }
        Ok(Graph { n, adj })
    }

    pub(crate) fn from_adjacency_unchecked(adj: Vec<u64>) -> Self {
        debug_assert!(Graph::from_adjacency(adj.clone()).is_ok());
        Graph { n: adj.len(), adj }
    }

    fn check_vertex(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.n {
            Err(Error::BadVertex { vertex: v, n: self.n })
        } else {
            Ok(v - 1)
        }
    }

    /// Adds the 1-based edge `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let (a, b) = (self.check_vertex(u)?, self.check_vertex(v)?);
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        self.adj[a] |= bit(b);
        self.adj[b] |= bit(a);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adjacency words, 0-based.
    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    /// Whether the 1-based pair `{u, v}` is an edge. Out-of-range vertices are never adjacent.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match (self.check_vertex(u), self.check_vertex(v)) {
            (Ok(a), Ok(b)) => self.adj[a] & bit(b) != 0,
            _ => false,
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        Ok(self.adj[self.check_vertex(v)?].count_ones() as usize)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|w| w.count_ones() as usize).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as 1-based pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in bits(self.adj[u] & !low_mask(u + 1)) {
                out.push((u + 1, v + 1));
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let all = low_mask(self.n);
        let adj = (0..self.n).map(|v| !self.adj[v] & all & !bit(v)).collect();
        Graph { n: self.n, adj }
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(Error::TooLarge { what: "graphs", n, cap: MAX_VERTICES });
        }
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|&w| w << self.n));
        Ok(Graph { n, adj })
    }

    /// Whether every edge of `self` is an edge of `host` (same vertex count required).
    pub fn is_subgraph_of(&self, host: &Graph) -> bool {
        self.n == host.n && self.adj.iter().zip(&host.adj).all(|(a, b)| a & !b == 0)
    }

    /// `(V(self), E(self) \ E(h))`.
    pub fn minus(&self, h: &Graph) -> Result<Graph> {
        if self.n != h.n {
            return Err(Error::BadArgs(format!(
                "vertex counts differ: {} and {}",
                self.n, h.n
            )));
        }
        if let Some(&(u, v)) = h.edges().iter().find(|&&(u, v)| !self.has_edge(u, v)) {
            return Err(Error::EdgeNotSubset(u, v));
        }
        let adj = self.adj.iter().zip(&h.adj).map(|(a, b)| a & !b).collect();
        Ok(Graph { n: self.n, adj })
    }

    /// Subgraph induced by a 0-based vertex mask, relabeled in increasing order.
    pub fn induced(&self, mask: u64) -> Graph {
        let verts: Vec<usize> = bits(mask & low_mask(self.n)).collect();
        let adj = verts
            .iter()
            .map(|&v| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.adj[v] & bit(w) != 0)
                    .fold(0u64, |acc, (i, _)| acc | bit(i))
            })
            .collect();
        Graph { n: verts.len(), adj }
    }

    /// Relabels: vertex `v` (0-based) of `self` becomes vertex `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![0u64; self.n];
        for v in 0..self.n {
            for w in bits(self.adj[v]) {
                adj[perm[v]] |= bit(perm[w]);
            }
        }
        Graph { n: self.n, adj }
    }

    /// Connected components as 0-based vertex masks, ordered by least vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen & bit(start) != 0 {
                continue;
            }
            let mut comp = bit(start);
            let mut frontier = bit(start);
            while frontier != 0 {
                let next = bits(frontier).fold(0u64, |acc, v| acc | self.adj[v]) & !comp;
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Whether `mask` (0-based) spans a clique.
    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.adj[v] & mask == mask & !bit(v))
    }

    pub fn independence_number(&self) -> usize {
        let comp = self.complement();
        max_clique_size(&comp.adj, low_mask(self.n))
    }

    pub fn clique_number(&self) -> usize {
        max_clique_size(&self.adj, low_mask(self.n))
    }

    pub fn contains_triangle(&self) -> bool {
        has_clique_of_size(&self.adj, low_mask(self.n), 3)
    }

    pub fn contains_k4(&self) -> bool {
        has_clique_of_size(&self.adj, low_mask(self.n), 4)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { n: self.n, edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }

    pub fn from_json(doc: &GraphJson) -> Result<Graph> {
        let mut g = Graph::empty(doc.n)?;
        for (i, &[u, v]) in doc.edges.iter().enumerate() {
            if u >= v {
                return Err(Error::parse(format!("edges[{i}]"), format!("expected u < v, got [{u},{v}]")));
            }
            if g.has_edge(u, v) {
                return Err(Error::parse(format!("edges[{i}]"), format!("duplicate edge [{u},{v}]")));
            }
            g.add_edge(u, v).map_err(|e| Error::parse(format!("edges[{i}]"), e.to_string()))?;
        }
        Ok(g)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// `{"n": 5, "edges": [[1,2],[2,3],...]}`, 1-based with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// `(V(g), E(g) \ E(h))`; fails with `EdgeNotSubset` when `h` is not a subgraph of `g`.
pub fn graph_minus(g: &Graph, h: &Graph) -> Result<Graph> {
    g.minus(h)
}

pub fn independence_number(g: &Graph) -> usize {
    g.independence_number()
}

pub fn clique_number(g: &Graph) -> usize {
    g.clique_number()
}

/// Disjoint union of cliques with the given sizes, in block order.
pub fn clique_union(sizes: &[usize]) -> Result<Graph> {
    let n: usize = sizes.iter().sum();
    let mut g = Graph::empty(n)?;
    let mut start = 0;
    for &s in sizes {
        let block = low_mask(start + s) & !low_mask(start);
        for v in start..start + s {
            g.adj[v] = block & !bit(v);
        }
        start += s;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i + 1, (i + 1) % 5 + 1));
            e.push((i + 1, i + 6));
            e.push((i + 6, (i + 2) % 5 + 6));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    fn prism() -> Graph {
        Graph::from_edges(6, &[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])
            .unwrap()
    }

    fn naive_alpha(g: &Graph) -> usize {
        (0u64..1 << g.n())
            .filter(|&s| bits(s).all(|v| g.adjacency()[v] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn independence_examples() {
        assert_eq!(Graph::cycle(5).unwrap().independence_number(), 2);
        assert_eq!(Graph::empty(7).unwrap().independence_number(), 7);
        assert_eq!(Graph::empty(0).unwrap().independence_number(), 0);
        let k4_prism = Graph::complete(4).unwrap().disjoint_union(&prism()).unwrap();
        assert_eq!(k4_prism.n(), 10);
        assert_eq!(k4_prism.independence_number(), 3);
        let p = petersen();
        assert_eq!(naive_alpha(&p), 4);
        assert_eq!(p.independence_number(), 4);
    }

    #[test]
    fn clique_examples() {
        for m in 1..=9 {
            assert_eq!(Graph::complete(m).unwrap().clique_number(), m);
        }
        assert_eq!(Graph::cycle(5).unwrap().clique_number(), 2);
        let c6bar = Graph::cycle(6).unwrap().complement();
        assert_eq!(naive_alpha(&c6bar.complement()), 3);
        assert_eq!(c6bar.clique_number(), 3);
    }

    #[test]
    fn minus_examples() {
        let c5 = Graph::cycle(5).unwrap();
        let d = graph_minus(&c5, &c5).unwrap();
        assert_eq!(d.edge_count(), 0);
        assert_eq!(d.independence_number(), 5);

        let k4 = Graph::complete(4).unwrap();
        let matching = Graph::from_edges(4, &[(1, 3), (2, 4)]).unwrap();
        let c4 = graph_minus(&k4, &matching).unwrap();
        assert!(is_isomorphic(&c4, &Graph::cycle(4).unwrap()));

        let stray = Graph::from_edges(5, &[(1, 3)]).unwrap();
        assert!(matches!(graph_minus(&c5, &stray), Err(Error::EdgeNotSubset(1, 3))));
    }

    #[test]
    fn json_rejects_duplicates_and_order() {
        let ok: GraphJson = serde_json::from_str(r#"{"n":3,"edges":[[1,2],[2,3]]}"#).unwrap();
        assert_eq!(Graph::from_json(&ok).unwrap().edge_count(), 2);
        let dup: GraphJson = serde_json::from_str(r#"{"n":3,"edges":[[1,2],[1,2]]}"#).unwrap();
        assert!(Graph::from_json(&dup).is_err());
        let rev: GraphJson = serde_json::from_str(r#"{"n":3,"edges":[[2,1]]}"#).unwrap();
        assert!(Graph::from_json(&rev).is_err());
        let out: GraphJson = serde_json::from_str(r#"{"n":3,"edges":[[1,4]]}"#).unwrap();
        assert!(Graph::from_json(&out).is_err());
    }

    #[test]
    fn from_adjacency_validates() {
        assert!(Graph::from_adjacency(vec![0b10, 0b00]).is_err());
        assert!(Graph::from_adjacency(vec![0b01]).is_err());
        assert!(Graph::from_adjacency(vec![0b10, 0b01]).is_ok());
    }

    #[test]
    fn components_and_cliques() {
        let g = clique_union(&[3, 2, 1]).unwrap();
        assert_eq!(g.components(), vec![0b000111, 0b011000, 0b100000]);
        assert!(g.components().iter().all(|&c| g.is_clique(c)));
        assert_eq!(g.independence_number(), 3);
    }

    #[test]
    fn exhaustive_small_alpha_matches_naive() {
        for n in 0..=5usize {
            let pairs: Vec<(usize, usize)> =
                (1..=n).flat_map(|v| (1..v).map(move |u| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                assert_eq!(g.independence_number(), naive_alpha(&g), "{g:?}");
            }
        }
    }
}
