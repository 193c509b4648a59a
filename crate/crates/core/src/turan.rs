//! The minimum-edge graphs with bounded independence number: `rK_{q+1} ∪ (n-r)K_q`
//! on `m = nq + r` vertices, and their edge counts.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{bit, clique_union, is_isomorphic, max_clique_size, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuranParams {
    /// Graph order.
    pub m: u64,
    /// Number of parts.
    pub n: u64,
    pub q: u64,
    pub r: u64,
    /// Edge count of the extremal graph.
    pub tbar: u64,
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Splits `m` into `n` near-equal parts. `n = 1` is accepted (one clique).
pub fn turan_params(m: u64, n: u64) -> Result<TuranParams> {
    if n == 0 {
        return Err(Error::BadArgs("the part count must be at least 1".into()));
    }
    let (q, r) = (m / n, m % n);
    let tbar = r * choose2(q + 1) + (n - r) * choose2(q);
    debug_assert_eq!(2 * tbar, q * (m + r) - q * n);
    Ok(TuranParams { m, n, q, r, tbar })
}

/// Edge count of the extremal graph, `½·q·(m − n + r)`.
pub fn tbar(m: u64, n: u64) -> Result<u64> {
    Ok(turan_params(m, n)?.tbar)
}

/// The extremal graph on vertices `1..=m`, larger cliques first. Empty parts
/// (`m < n`) contribute nothing, leaving `m` isolated vertices.
pub fn turan_graph(m: u64, n: u64) -> Result<Graph> {
    let p = turan_params(m, n)?;
    let mut sizes = vec![(p.q + 1) as usize; p.r as usize];
    sizes.extend(std::iter::repeat_n(p.q as usize, (p.n - p.r) as usize));
    sizes.retain(|&s| s > 0);
    clique_union(&sizes)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub max_m: usize,
    /// Labeled graphs examined, summed over orders.
    pub graphs_checked: u64,
    /// (graph, part count) pairs examined.
    pub instances_checked: u64,
    /// Graphs at the edge threshold with independence number exactly `n`.
    pub equality_cases: u64,
    pub violations: Vec<String>,
}

/// Largest order accepted by [`check_extremal_lemma`].
pub const EXTREMAL_CHECK_CAP: usize = 8;

/// Exhaustively checks, for every labeled graph of order `m <= max_m` and every
/// `2 <= n <= m`: fewer than `tbar(m, n)` edges forces `alpha >= n + 1`, and at
/// exactly `tbar(m, n)` edges with `alpha = n` the graph is the extremal one.
pub fn check_extremal_lemma(max_m: usize) -> Result<ExtremalReport> {
    if max_m > EXTREMAL_CHECK_CAP {
        return Err(Error::TooLarge { what: "extremal check", n: max_m, cap: EXTREMAL_CHECK_CAP });
    }
    let mut report = ExtremalReport { max_m, ..Default::default() };
    for m in 1..=max_m {
        let pairs: Vec<(usize, usize)> = (1..m).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
        let thresholds: Vec<u64> = (0..=m as u64).map(|n| if n >= 1 { tbar(m as u64, n).unwrap() } else { 0 }).collect();
        let extremal: Vec<Option<Graph>> =
            (0..=m as u64).map(|n| (n >= 2).then(|| turan_graph(m as u64, n).unwrap())).collect();
        let total = 1u64 << pairs.len();
        let chunk = (total / 256).max(1);
        let partial: Vec<ExtremalReport> = (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut rep = ExtremalReport::default();
                let mut adj = vec![0u64; m];
                for code in c * chunk..((c + 1) * chunk).min(total) {
                    adj.iter_mut().for_each(|w| *w = 0);
                    for (i, &(u, v)) in pairs.iter().enumerate() {
                        if code >> i & 1 == 1 {
                            adj[u] |= bit(v);
                            adj[v] |= bit(u);
                        }
                    }
                    let edges = code.count_ones() as u64;
                    let comp: Vec<u64> =
                        (0..m).map(|v| !adj[v] & crate::graphs::low_mask(m) & !bit(v)).collect();
                    let alpha = max_clique_size(&comp, crate::graphs::low_mask(m)) as u64;
                    rep.graphs_checked += 1;
                    for n in 2..=m as u64 {
                        rep.instances_checked += 1;
                        let t = thresholds[n as usize];
                        if edges < t && alpha < n + 1 {
                            rep.violations.push(format!("m={m} n={n} code={code:#x}: {edges} edges but alpha={alpha}"));
                        }
                        if edges == t && alpha == n {
                            rep.equality_cases += 1;
                            let g = Graph::from_adjacency_unchecked(adj.clone());
                            if !is_isomorphic(&g, extremal[n as usize].as_ref().unwrap()) {
                                rep.violations.push(format!("m={m} n={n} code={code:#x}: extremal count but not the extremal graph"));
                            }
                        }
                    }
                }
                rep
            })
            .collect();
        for p in partial {
            report.graphs_checked += p.graphs_checked;
            report.instances_checked += p.instances_checked;
            report.equality_cases += p.equality_cases;
            report.violations.extend(p.violations);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_examples() {
        let p = turan_params(9, 3).unwrap();
        assert_eq!((p.q, p.r, p.tbar), (3, 0, 9));
        let p = turan_params(6, 4).unwrap();
        assert_eq!((p.q, p.r, p.tbar), (1, 2, 2));
        let p = turan_params(5, 1).unwrap();
        assert_eq!((p.q, p.r, p.tbar), (5, 0, 10));
        assert!(turan_params(3, 0).is_err());
    }

    #[test]
    fn increment_identity_and_closed_forms() {
        for n in 1..=20u64 {
            for m in 0..=200u64 {
                let p = turan_params(m, n).unwrap();
                assert_eq!(2 * p.tbar, p.q * (m + p.r) - p.q * n);
                assert_eq!(tbar(m + 1, n).unwrap() - p.tbar, p.q, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn graph_examples() {
        let g = turan_graph(9, 3).unwrap();
        assert!(is_isomorphic(&g, &clique_union(&[3, 3, 3]).unwrap()));
        let g = turan_graph(6, 4).unwrap();
        assert!(is_isomorphic(&g, &clique_union(&[2, 2, 1, 1]).unwrap()));
        assert_eq!(g.independence_number(), 4);
        let g = turan_graph(4, 2).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (3, 4)]);
        // q = 0: only isolated vertices.
        let g = turan_graph(3, 5).unwrap();
        assert_eq!((g.n(), g.edge_count(), g.independence_number()), (3, 0, 3));
    }

    #[test]
    fn alpha_and_omega_of_extremal_graphs() {
        for n in 1..=8u64 {
            for m in n..=24u64 {
                let p = turan_params(m, n).unwrap();
                let g = turan_graph(m, n).unwrap();
                assert_eq!(g.edge_count() as u64, p.tbar);
                assert_eq!(g.independence_number() as u64, n);
                assert_eq!(g.clique_number() as u64, if p.r == 0 { p.q } else { p.q + 1 });
            }
        }
    }

    #[test]
    fn single_instances() {
        let one_edge = Graph::from_edges(6, &[(1, 2)]).unwrap();
        assert!((one_edge.edge_count() as u64) < tbar(6, 4).unwrap());
        assert_eq!(one_edge.independence_number(), 5);
        let g = clique_union(&[3, 3, 3]).unwrap();
        assert_eq!(g.edge_count() as u64, tbar(9, 3).unwrap());
        assert_eq!(g.independence_number(), 3);
        assert!(is_isomorphic(&g, &turan_graph(9, 3).unwrap()));
    }

    #[test]
    fn extremal_lemma_up_to_five() {
        let r = check_extremal_lemma(5).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.graphs_checked, 1 + 2 + 8 + 64 + 1024);
        assert!(r.equality_cases > 0);
        assert!(check_extremal_lemma(9).is_err());
    }
}
