//! Edge colorings of complete graphs and their per-color statistics.
//!
//! Pairs are stored in a flat array ranked in colex order, `rank(u, v) =
//! v(v-1)/2 + u` for 0-based `u < v`. The ranking never leaves this crate.

mod witness;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{bit, Graph};

pub use witness::{builtin_witness, verify_witness, witness_library, Witness, WitnessJson, WitnessReport};

/// Most colors a coloring may use.
pub const MAX_COLORS: usize = 255;

#[inline]
pub(crate) const fn pair_rank(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

#[inline]
pub(crate) const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// 0-based pairs in rank order.
pub(crate) fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|v| (0..v).map(move |u| (u, v)))
}

/// A total map from the pairs of `[n]` to the colors `[k]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EdgeColoring {
    n: usize,
    k: usize,
    /// 0-based colors by pair rank.
    colors: Vec<u8>,
}

impl EdgeColoring {
    fn check_shape(n: usize, k: usize) -> Result<()> {
        if n > crate::graphs::MAX_VERTICES {
            return Err(Error::TooLarge { what: "colorings", n, cap: crate::graphs::MAX_VERTICES });
        }
        if k == 0 || k > MAX_COLORS {
            return Err(Error::InvalidColoring(format!("color count must be in 1..={MAX_COLORS}, got {k}")));
        }
        Ok(())
    }

    /// Colors every pair with `f(u, v)` (1-based vertices and colors).
    pub fn from_fn(n: usize, k: usize, mut f: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        Self::check_shape(n, k)?;
        let mut colors = Vec::with_capacity(pair_count(n));
        for (u, v) in pairs(n) {
            let c = f(u + 1, v + 1);
            if c == 0 || c > k {
                return Err(Error::BadColor { color: c, k });
            }
            colors.push((c - 1) as u8);
        }
        Ok(EdgeColoring { n, k, colors })
    }

    /// From 0-based colors in pair-rank order.
    pub(crate) fn from_ranked(n: usize, k: usize, colors: Vec<u8>) -> Self {
        debug_assert_eq!(colors.len(), pair_count(n));
        debug_assert!(colors.iter().all(|&c| (c as usize) < k));
        EdgeColoring { n, k, colors }
    }

    /// Color `i + 1` gets the edges of `classes[i]`; the classes must partition the pairs.
    pub fn from_classes(n: usize, classes: &[Vec<(usize, usize)>]) -> Result<Self> {
        let k = classes.len();
        Self::check_shape(n, k)?;
        let mut colors = vec![u8::MAX; pair_count(n)];
        for (i, class) in classes.iter().enumerate() {
            for &(a, b) in class {
                let (u, v) = (a.min(b), a.max(b));
                if u == 0 || v > n || u == v {
                    return Err(Error::InvalidColoring(format!("bad pair {{{a},{b}}} in class {}", i + 1)));
                }
                let r = pair_rank(u - 1, v - 1);
                if colors[r] != u8::MAX {
                    return Err(Error::InvalidColoring(format!("pair {{{u},{v}}} colored twice")));
                }
                colors[r] = i as u8;
            }
        }
        if let Some(r) = colors.iter().position(|&c| c == u8::MAX) {
            let (u, v) = pairs(n).nth(r).unwrap();
            return Err(Error::InvalidColoring(format!("pair {{{},{}}} has no color", u + 1, v + 1)));
        }
        Ok(EdgeColoring { n, k, colors })
    }

    /// The coloring whose class `i` is `graphs[i - 1]`; the graphs must partition E(K_n).
    pub fn from_graphs(graphs: &[Graph]) -> Result<Self> {
        let n = graphs.first().map_or(0, Graph::n);
        if graphs.iter().any(|g| g.n() != n) {
            return Err(Error::InvalidColoring("classes have different orders".into()));
        }
        let classes: Vec<Vec<(usize, usize)>> = graphs.iter().map(Graph::edges).collect();
        Self::from_classes(n, &classes)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Color of the 1-based pair `{u, v}`.
    pub fn color(&self, u: usize, v: usize) -> Result<usize> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(Error::BadVertex { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::BadArgs(format!("{{{u},{v}}} is not a pair")));
        }
        Ok(self.colors[pair_rank(u.min(v) - 1, u.max(v) - 1)] as usize + 1)
    }

    /// 0-based colors in colex pair order.
    pub fn ranked_colors(&self) -> &[u8] {
        &self.colors
    }

    fn check_color(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.k {
            Err(Error::BadColor { color: i, k: self.k })
        } else {
            Ok(i - 1)
        }
    }

    /// The graph `([n], f^{-1}(i))`.
    pub fn color_class(&self, i: usize) -> Result<Graph> {
        let c = self.check_color(i)? as u8;
        Ok(self.class_graph(c))
    }

    fn class_graph(&self, c: u8) -> Graph {
        let mut adj = vec![0u64; self.n];
        for ((u, v), &col) in pairs(self.n).zip(&self.colors) {
            if col == c {
                adj[u] |= bit(v);
                adj[v] |= bit(u);
            }
        }
        Graph::from_adjacency_unchecked(adj)
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// `alpha_i(f)` for every color.
    pub fn alpha_vector(&self) -> Vec<usize> {
        (0..self.k as u8).map(|c| self.class_graph(c).independence_number()).collect()
    }

    /// Number of neighbors of `x` along color `i`.
    pub fn color_degree(&self, x: usize, i: usize) -> Result<usize> {
        if x == 0 || x > self.n {
            return Err(Error::BadVertex { vertex: x, n: self.n });
        }
        let c = self.check_color(i)? as u8;
        let x0 = x - 1;
        Ok((0..self.n)
            .filter(|&y| y != x0 && self.colors[pair_rank(x0.min(y), x0.max(y))] == c)
            .count())
    }

    /// Recolors through `map` (1-based, `map[i-1]` is the new color of `i`) into `k` colors.
    pub fn recolored(&self, map: &[usize], k: usize) -> Result<Self> {
        Self::check_shape(self.n, k)?;
        if map.len() != self.k || map.iter().any(|&c| c == 0 || c > k) {
            return Err(Error::BadArgs("color map does not fit".into()));
        }
        let colors = self.colors.iter().map(|&c| (map[c as usize] - 1) as u8).collect();
        Ok(EdgeColoring { n: self.n, k, colors })
    }

    /// Restriction to the first `m` vertices.
    pub fn restricted(&self, m: usize) -> Self {
        let m = m.min(self.n);
        EdgeColoring { n: m, k: self.k, colors: self.colors[..pair_count(m)].to_vec() }
    }

    pub fn to_json(&self) -> ColoringJson {
        let edges = pairs(self.n)
            .zip(&self.colors)
            .map(|((u, v), &c)| ColoredEdge { u: u + 1, v: v + 1, c: c as usize + 1 })
            .collect();
        ColoringJson { n: self.n, k: self.k, edges }
    }

    pub fn from_json(doc: &ColoringJson) -> Result<Self> {
        Self::check_shape(doc.n, doc.k)?;
        let mut colors = vec![u8::MAX; pair_count(doc.n)];
        for (i, e) in doc.edges.iter().enumerate() {
            let at = format!("edges[{i}]");
            if e.u == 0 || e.v > doc.n || e.u >= e.v {
                return Err(Error::parse(at, format!("expected 1 <= u < v <= {}, got u={} v={}", doc.n, e.u, e.v)));
            }
            if e.c == 0 || e.c > doc.k {
                return Err(Error::parse(at, format!("color {} outside [1,{}]", e.c, doc.k)));
            }
            let r = pair_rank(e.u - 1, e.v - 1);
            if colors[r] != u8::MAX {
                return Err(Error::parse(at, format!("pair {{{},{}}} listed twice", e.u, e.v)));
            }
            colors[r] = (e.c - 1) as u8;
        }
        if let Some(r) = colors.iter().position(|&c| c == u8::MAX) {
            let (u, v) = pairs(doc.n).nth(r).unwrap();
            return Err(Error::parse("edges", format!("pair {{{},{}}} is missing", u + 1, v + 1)));
        }
        Ok(EdgeColoring { n: doc.n, k: doc.k, colors })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredEdge {
    pub u: usize,
    pub v: usize,
    pub c: usize,
}

/// `{"n": 7, "k": 3, "edges": [{"u":1, "v":2, "c":2}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<ColoredEdge>,
}

pub fn color_class(f: &EdgeColoring, i: usize) -> Result<Graph> {
    f.color_class(i)
}

pub fn alpha_vector(f: &EdgeColoring) -> Vec<usize> {
    f.alpha_vector()
}

pub fn color_degree(f: &EdgeColoring, x: usize, i: usize) -> Result<usize> {
    f.color_degree(x, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::is_isomorphic;
    use proptest::prelude::*;

    fn w(id: &str) -> EdgeColoring {
        builtin_witness(id).unwrap().coloring
    }

    #[test]
    fn w1_classes() {
        let f = w("W1");
        let c2 = f.color_class(2).unwrap();
        assert!(is_isomorphic(&c2, &Graph::cycle(7).unwrap()));
        assert_eq!(c2.edges(), vec![(1, 2), (1, 7), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]);
        assert_eq!(f.color_class(1).unwrap().edges(), vec![(2, 5), (3, 6), (4, 7)]);
        assert_eq!(f.color_class(1).unwrap().degree(1).unwrap(), 0);
        assert!(matches!(f.color_class(4), Err(Error::BadColor { .. })));
    }

    #[test]
    fn monochromatic() {
        let f = EdgeColoring::from_fn(5, 2, |_, _| 1).unwrap();
        assert_eq!(f.color_class(2).unwrap().edge_count(), 0);
        assert_eq!(f.alpha_vector(), vec![1, 5]);
    }

    #[test]
    fn w1_color_degrees() {
        let f = w("W1");
        assert_eq!(f.color_degree(1, 1).unwrap(), 0);
        assert_eq!(f.color_degree(1, 2).unwrap(), 2);
        assert_eq!(f.color_degree(1, 3).unwrap(), 4);
        assert!(matches!(f.color_degree(8, 1), Err(Error::BadVertex { .. })));
        assert!(matches!(f.color_degree(1, 0), Err(Error::BadColor { .. })));
    }

    #[test]
    fn json_rejects_bad_documents() {
        let good = w("W1").to_json();
        assert_eq!(EdgeColoring::from_json(&good).unwrap(), w("W1"));
        let mut dup = good.clone();
        dup.edges[1] = dup.edges[0];
        assert!(matches!(EdgeColoring::from_json(&dup), Err(Error::Parse { .. })));
        let mut missing = good.clone();
        missing.edges.pop();
        assert!(EdgeColoring::from_json(&missing).is_err());
        let mut badc = good;
        badc.edges[0].c = 4;
        assert!(EdgeColoring::from_json(&badc).is_err());
    }

    #[test]
    fn from_classes_checks_partition() {
        assert!(EdgeColoring::from_classes(3, &[vec![(1, 2)], vec![(2, 3)]]).is_err());
        assert!(EdgeColoring::from_classes(3, &[vec![(1, 2), (1, 3)], vec![(2, 3), (1, 2)]]).is_err());
        assert!(EdgeColoring::from_classes(3, &[vec![(1, 2), (1, 3)], vec![(3, 2)]]).is_ok());
    }

    fn arb_coloring() -> impl Strategy<Value = EdgeColoring> {
        (1usize..=8, 1usize..=4).prop_flat_map(|(n, k)| {
            prop::collection::vec(0u8..k as u8, pair_count(n))
                .prop_map(move |colors| EdgeColoring::from_ranked(n, k, colors))
        })
    }

    proptest! {
        #[test]
        fn classes_partition_pairs(f in arb_coloring()) {
            let total: usize = (1..=f.k()).map(|i| f.color_class(i).unwrap().edge_count()).sum();
            prop_assert_eq!(total, pair_count(f.n()));
            prop_assert_eq!(f.class_sizes().iter().sum::<usize>(), pair_count(f.n()));
        }

        #[test]
        fn degree_sum(f in arb_coloring()) {
            for x in 1..=f.n() {
                let s: usize = (1..=f.k()).map(|i| f.color_degree(x, i).unwrap()).sum();
                prop_assert_eq!(s, f.n() - 1);
            }
        }

        #[test]
        fn two_color_duality(colors in (1usize..=8).prop_flat_map(|n| prop::collection::vec(0u8..2, pair_count(n)))) {
            let n = (1..=8).find(|&n| pair_count(n) == colors.len()).unwrap();
            let f = EdgeColoring::from_ranked(n, 2, colors);
            let a = f.alpha_vector();
            prop_assert_eq!(a[0], f.color_class(2).unwrap().clique_number().max(1));
            prop_assert_eq!(a[1], f.color_class(1).unwrap().clique_number().max(1));
        }

        /// Merging colors `k-1` and `k` only coarsens: every other class keeps its
        /// alpha and the merged class cannot gain independent sets.
        #[test]
        fn merging_colors(f in arb_coloring()) {
            prop_assume!(f.k() >= 2);
            let k = f.k();
            let map: Vec<usize> = (1..=k).map(|i| i.min(k - 1)).collect();
            let g = f.recolored(&map, k - 1).unwrap();
            let (af, ag) = (f.alpha_vector(), g.alpha_vector());
            for i in 0..k - 2 {
                prop_assert_eq!(af[i], ag[i]);
            }
            prop_assert!(ag[k - 2] <= af[k - 2].min(af[k - 1]));
        }
    }
}
