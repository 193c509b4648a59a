//! Exhaustive checks of small-graph facts: the nested Ramsey-graph criterion for
//! three colors, cubic graphs of order 10, and triangle-free graphs of order 8.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colorings::{pair_count, pairs};
use crate::error::{Error, Result};
use crate::graphs::{bit, enumerate_graphs, low_mask, max_clique_size, Graph, GraphConstraints};

/// Largest order accepted by [`decide_via_ramsey_pairs`].
pub const RAMSEY_PAIRS_CAP: usize = 7;

/// Adjacency rows of the labeled graph whose colex edge code is `code`.
fn rows(n: usize, code: u32, out: &mut [u64]) {
    out.iter_mut().for_each(|w| *w = 0);
    for (i, (u, v)) in pairs(n).enumerate() {
        if code >> i & 1 == 1 {
            out[u] |= bit(v);
            out[v] |= bit(u);
        }
    }
}

fn alpha_of(n: usize, adj: &[u64]) -> usize {
    let full = low_mask(n);
    let comp: Vec<u64> = (0..n).map(|v| !adj[v] & full & !bit(v)).collect();
    max_clique_size(&comp, full)
}

/// `true` iff for all Ramsey `(m3, m2)`-graphs `H ⊆ G` on `[n]`, `alpha(G − H) >= m1`,
/// which holds exactly when `R̄(m1, m2, m3) <= n`.
pub fn decide_via_ramsey_pairs(m1: u32, m2: u32, m3: u32, n: usize) -> Result<bool> {
    if m1 <= 2 || m2 <= 2 || m3 <= 2 {
        return Err(Error::BadArgs("all three thresholds must exceed 2".into()));
    }
    if n > RAMSEY_PAIRS_CAP {
        return Err(Error::TooLarge { what: "nested Ramsey-graph check", n, cap: RAMSEY_PAIRS_CAP });
    }
    if n == 0 {
        return Err(Error::BadArgs("the order must be at least 1".into()));
    }
    let total = 1u32 << pair_count(n);
    let ramsey: Vec<bool> = (0..total)
        .into_par_iter()
        .map_init(
            || vec![0u64; n],
            |adj, code| {
                rows(n, code, adj);
                max_clique_size(adj, low_mask(n)) < m3 as usize && alpha_of(n, adj) < m2 as usize
            },
        )
        .collect();
    let graphs: Vec<u32> = (0..total).filter(|&c| ramsey[c as usize]).collect();
    let violated = graphs.par_iter().any(|&g| {
        let mut adj = vec![0u64; n];
        let mut h = g;
        loop {
            if ramsey[h as usize] {
                rows(n, g & !h, &mut adj);
                if alpha_of(n, &adj) < m1 as usize {
                    return true;
                }
            }
            if h == 0 {
                return false;
            }
            h = (h - 1) & g;
        }
    });
    Ok(!violated)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KfreeReport {
    /// Cubic graphs of order 10 up to isomorphism.
    pub cubic_graphs: u64,
    pub k4_free: u64,
    pub min_alpha_k4_free: usize,
    /// `K_4` plus the triangular prism.
    pub remark_alpha: usize,
    pub remark_contains_k4: bool,
    pub violations: Vec<String>,
}

/// Every `K_4`-free cubic graph of order 10 has `alpha >= 4`; the bound fails
/// once `K_4` is allowed.
pub fn check_kfree_lemma() -> Result<KfreeReport> {
    let c = GraphConstraints { regular_degree: Some(3), up_to_iso: true, ..Default::default() };
    let mut rep = KfreeReport { min_alpha_k4_free: usize::MAX, ..Default::default() };
    enumerate_graphs(10, &c, |g| {
        rep.cubic_graphs += 1;
        if g.contains_k4() {
            return;
        }
        rep.k4_free += 1;
        let a = g.independence_number();
        rep.min_alpha_k4_free = rep.min_alpha_k4_free.min(a);
        if a < 4 {
            rep.violations.push(format!("K4-free cubic graph {:?} has alpha {a}", g.edges()));
        }
    })?;
    let prism = Graph::from_edges(6, &[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)])?;
    let remark = Graph::complete(4)?.disjoint_union(&prism)?;
    rep.remark_alpha = remark.independence_number();
    rep.remark_contains_k4 = remark.contains_k4();
    if rep.remark_alpha != 3 || !rep.remark_contains_k4 {
        rep.violations.push(format!("K4 plus prism: alpha {} contains K4 {}", rep.remark_alpha, rep.remark_contains_k4));
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoReport {
    /// Labeled triangle-free graphs on 7 vertices.
    pub base_graphs: u64,
    /// Graphs of order 8 checked (8 attachments per base graph).
    pub extensions: u64,
    pub min_alpha: usize,
    pub violations: Vec<String>,
}

/// Every triangle-free graph of order 8 with a vertex of degree at most one has `alpha >= 4`.
pub fn check_memo_lemma() -> Result<MemoReport> {
    let c = GraphConstraints { triangle_free: true, ..Default::default() };
    let mut bases = Vec::new();
    enumerate_graphs(7, &c, |g| bases.push(g.adjacency().to_vec()))?;
    let per: Vec<(usize, Vec<String>)> = bases
        .par_iter()
        .map(|base| {
            let mut adj = vec![0u64; 8];
            let mut min = usize::MAX;
            let mut bad = Vec::new();
            for attach in 0..=7usize {
                adj[..7].copy_from_slice(base);
                adj[7] = 0;
                if attach < 7 {
                    adj[attach] |= bit(7);
                    adj[7] |= bit(attach);
                }
                let a = alpha_of(8, &adj);
                min = min.min(a);
                if a < 4 {
                    bad.push(format!("base {base:?} with vertex 8 attached to {attach}: alpha {a}"));
                }
            }
            (min, bad)
        })
        .collect();
    Ok(MemoReport {
        base_graphs: bases.len() as u64,
        extensions: 8 * bases.len() as u64,
        min_alpha: per.iter().map(|p| p.0).min().unwrap_or(0),
        violations: per.into_iter().flat_map(|p| p.1).collect(),
    })
}
