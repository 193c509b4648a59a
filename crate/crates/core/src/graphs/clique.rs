//! Exact maximum-clique branch and bound over adjacency bitsets.
//!
//! Candidates are greedily partitioned into independent sets; the number of
//! classes bounds how much any branch can still add. Independence numbers are
//! computed as clique numbers of the complement.

use super::{bit, bits};

/// Greedy coloring of `cand`. Returns vertices in order of non-decreasing color
/// together with the color of each (colors start at 1).
fn color_sort(adj: &[u64], cand: u64, order: &mut Vec<usize>, colors: &mut Vec<u32>) {
    order.clear();
    colors.clear();
    let mut uncolored = cand;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !bit(v) & !adj[v];
            uncolored &= !bit(v);
            order.push(v);
            colors.push(color);
        }
    }
}

struct MaxClique<'a> {
    adj: &'a [u64],
    best: usize,
    /// Stop as soon as `best` reaches this size.
    target: usize,
}

impl MaxClique<'_> {
    fn expand(&mut self, cand: u64, size: usize) {
        let mut order = Vec::with_capacity(cand.count_ones() as usize);
        let mut colors = Vec::with_capacity(order.capacity());
        color_sort(self.adj, cand, &mut order, &mut colors);
        let mut cand = cand;
        for idx in (0..order.len()).rev() {
            if size + colors[idx] as usize <= self.best || self.best >= self.target {
                return;
            }
            let v = order[idx];
            let next = cand & self.adj[v];
            if next == 0 {
                if size + 1 > self.best {
                    self.best = size + 1;
                }
            } else {
                self.expand(next, size + 1);
            }
            cand &= !bit(v);
        }
    }
}

/// Size of a maximum clique inside `cand` (0-based vertex mask).
pub fn max_clique_size(adj: &[u64], cand: u64) -> usize {
    if cand == 0 {
        return 0;
    }
    let mut s = MaxClique { adj, best: 0, target: usize::MAX };
    s.expand(cand, 0);
    s.best
}

/// Whether `cand` contains a clique with `size` vertices.
pub fn has_clique_of_size(adj: &[u64], cand: u64, size: usize) -> bool {
    match size {
        0 => true,
        1 => cand != 0,
        2 => bits(cand).any(|v| adj[v] & cand != 0),
        _ => {
            if (cand.count_ones() as usize) < size {
                return false;
            }
            let mut s = MaxClique { adj, best: 0, target: size };
            s.expand(cand, 0);
            s.best >= size
        }
    }
}
