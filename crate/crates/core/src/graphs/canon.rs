//! Canonical labeling by the lexicographically largest adjacency string.
//!
//! The string lists the upper triangle column by column (pairs in colex order:
//! {0,1}, {0,2}, {1,2}, {0,3}, ...). Column `j` is packed into a word whose most
//! significant used bit is row 0, so comparing words compares columns
//! lexicographically. The largest string is found by branch and bound: for a
//! fixed prefix only the vertices producing the largest next column can lead
//! to the maximum.

use super::{bit, Graph};

/// Canonical string plus a relabeling realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    /// `columns[j]` for `j` in `0..n` (column 0 is always 0).
    pub columns: Vec<u64>,
    /// `order[j]` is the original 0-based vertex placed at position `j`.
    pub order: Vec<usize>,
}

#[inline]
fn column(adj: &[u64], placed: &[usize], w: usize) -> u64 {
    let j = placed.len();
    let mut col = 0u64;
    for (i, &p) in placed.iter().enumerate() {
        if adj[p] & bit(w) != 0 {
            col |= 1 << (j - 1 - i);
        }
    }
    col
}

struct Canon<'a> {
    adj: &'a [u64],
    n: usize,
    best: Option<(Vec<u64>, Vec<usize>)>,
    cols: Vec<u64>,
    placed: Vec<usize>,
}

impl Canon<'_> {
    /// `tied`: the current prefix equals the best prefix so far.
    fn dfs(&mut self, used: u64, tied: bool) {
        let j = self.placed.len();
        if j == self.n {
            if !tied || self.best.is_none() {
                self.best = Some((self.cols.clone(), self.placed.clone()));
            }
            return;
        }
        let mut top = 0u64;
        let mut cands = Vec::new();
        for w in (0..self.n).filter(|&w| used & bit(w) == 0) {
            let c = column(self.adj, &self.placed, w);
            if cands.is_empty() || c > top {
                top = c;
                cands.clear();
                cands.push(w);
            } else if c == top {
                cands.push(w);
            }
        }
        let mut tied = tied && self.best.is_some();
        if tied {
            let b = self.best.as_ref().unwrap().0[j];
            if top < b {
                return;
            }
            if top > b {
                tied = false;
            }
        }
        for w in cands {
            self.cols.push(top);
            self.placed.push(w);
            self.dfs(used | bit(w), tied);
            self.placed.pop();
            self.cols.pop();
            // A strictly larger branch replaced the best; later siblings compare to it.
            if !tied {
                tied = true;
            }
        }
    }
}

/// Largest adjacency string over all relabelings.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    let mut c = Canon { adj: g.adjacency(), n, best: None, cols: Vec::new(), placed: Vec::new() };
    c.dfs(0, true);
    let (columns, order) = c.best.unwrap_or_default();
    CanonicalForm { n, columns, order }
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let (mut dg, mut dh) = (g.degrees(), h.degrees());
    dg.sort_unstable();
    dh.sort_unstable();
    dg == dh && canonical_form(g).columns == canonical_form(h).columns
}

fn identity_columns(adj: &[u64]) -> Vec<u64> {
    let order: Vec<usize> = (0..adj.len()).collect();
    (0..adj.len()).map(|j| column(adj, &order[..j], j)).collect()
}

/// Whether the identity labeling already gives the largest string.
pub fn is_canonical(g: &Graph) -> bool {
    let adj = g.adjacency();
    let ident = identity_columns(adj);
    let mut placed = Vec::with_capacity(adj.len());
    canonical_below(adj, &ident, &mut placed, 0)
}

fn canonical_below(adj: &[u64], ident: &[u64], placed: &mut Vec<usize>, used: u64) -> bool {
    let j = placed.len();
    if j == adj.len() {
        return true;
    }
    for w in (0..adj.len()).filter(|&w| used & bit(w) == 0) {
        let c = column(adj, placed, w);
        if c > ident[j] {
            return false;
        }
        if c == ident[j] {
            placed.push(w);
            let ok = canonical_below(adj, ident, placed, used | bit(w));
            placed.pop();
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Number of vertex permutations mapping `g` onto itself.
pub fn automorphism_count(g: &Graph) -> u64 {
    fn go(adj: &[u64], deg: &[u32], img: &mut Vec<usize>, used: u64) -> u64 {
        let j = img.len();
        if j == adj.len() {
            return 1;
        }
        let mut total = 0;
        for w in (0..adj.len()).filter(|&w| used & bit(w) == 0 && deg[w] == deg[j]) {
            let consistent =
                img.iter().enumerate().all(|(i, &p)| (adj[i] & bit(j) != 0) == (adj[p] & bit(w) != 0));
            if consistent {
                img.push(w);
                total += go(adj, deg, img, used | bit(w));
                img.pop();
            }
        }
        total
    }
    let deg: Vec<u32> = g.adjacency().iter().map(|w| w.count_ones()).collect();
    go(g.adjacency(), &deg, &mut Vec::with_capacity(g.n()), 0)
}
