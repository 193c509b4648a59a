//! Factorizations of `K_N` into factors whose components are cliques, and the
//! exact values they certify.
//!
//! Factors are kept as edge lists so orders above the 64-vertex bitset limit
//! (the affine plane of order 9 lives on 81 points) remain representable.

mod gf;
mod mols;
mod search;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bounds::Query;
use crate::colorings::EdgeColoring;
use crate::error::{Error, Result};
use crate::graphs::Graph;

pub use gf::{affine_factorization, GaloisField, AFFINE_ORDERS};
pub use mols::{are_orthogonal, is_latin, mols_extract, mols_to_coloring, LatinSquare};
pub use search::{factorization_search, FactorSearchConfig, FactorSearchOutcome, FactorSearchStats};

/// `K_N` split into edge-disjoint factors covering every pair exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: usize,
    /// 1-based pairs `(u, v)`, `u < v`, each factor sorted.
    factors: Vec<Vec<(usize, usize)>>,
}

/// `{"N":9, "factors":[[[1,2],[1,3],...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub factors: Vec<Vec<[usize; 2]>>,
}

fn rank(u: usize, v: usize) -> usize {
    // 1-based u < v.
    (v - 1) * (v - 2) / 2 + (u - 1)
}

impl Factorization {
    /// Validates the partition of `E(K_N)` pair by pair.
    pub fn new(n: usize, factors: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let total = n * n.saturating_sub(1) / 2;
        let mut seen = vec![false; total];
        let mut out = Vec::with_capacity(factors.len());
        for (i, f) in factors.into_iter().enumerate() {
            let mut norm = Vec::with_capacity(f.len());
            for (a, b) in f {
                let (u, v) = (a.min(b), a.max(b));
                if u == 0 || v > n || u == v {
                    return Err(Error::InvalidFactorization(format!("factor {}: bad pair {{{a},{b}}}", i + 1)));
                }
                if std::mem::replace(&mut seen[rank(u, v)], true) {
                    return Err(Error::InvalidFactorization(format!("pair {{{u},{v}}} is covered twice")));
                }
                norm.push((u, v));
            }
            norm.sort_unstable_by_key(|&(u, v)| (v, u));
            out.push(norm);
        }
        if let Some(r) = seen.iter().position(|s| !s) {
            let v = (1..=n).find(|&v| (v - 1) * v / 2 > r).unwrap();
            let u = r - (v - 1) * (v - 2) / 2 + 1;
            return Err(Error::InvalidFactorization(format!("pair {{{u},{v}}} is not covered")));
        }
        Ok(Factorization { n, factors: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_edges(&self, i: usize) -> &[(usize, usize)] {
        &self.factors[i]
    }

    /// Factor `i` (0-based) as a graph; limited to 64 vertices.
    pub fn factor_graph(&self, i: usize) -> Result<Graph> {
        Graph::from_edges(self.n, &self.factors[i])
    }

    pub fn to_coloring(&self) -> Result<EdgeColoring> {
        EdgeColoring::from_classes(self.n, &self.factors)
    }

    pub fn from_coloring(f: &EdgeColoring) -> Result<Self> {
        let classes = (1..=f.k()).map(|i| f.color_class(i).map(|g| g.edges())).collect::<Result<Vec<_>>>()?;
        Factorization::new(f.n(), classes)
    }

    /// Component vertex sets of factor `i`, each sorted, ordered by smallest vertex.
    pub fn components(&self, i: usize) -> Vec<Vec<usize>> {
        components(self.n, &self.factors[i])
    }

    pub fn shapes(&self) -> Vec<Option<FactorClassShape>> {
        (0..self.k()).map(|i| classify_edges(self.n, &self.factors[i])).collect()
    }

    pub fn to_json(&self) -> FactorizationJson {
        FactorizationJson {
            n: self.n,
            factors: self.factors.iter().map(|f| f.iter().map(|&(u, v)| [u, v]).collect()).collect(),
        }
    }

    pub fn from_json(doc: &FactorizationJson) -> Result<Self> {
        Factorization::new(doc.n, doc.factors.iter().map(|f| f.iter().map(|&[u, v]| (u, v)).collect()).collect())
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let next = parent[x];
        parent[x] = r;
        x = next;
    }
    r
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..=n).collect();
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for v in 1..=n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

/// A factor isomorphic to `r K_{q+1} ∪ (n - r) K_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorClassShape {
    /// Component count.
    pub n: usize,
    pub q: usize,
    pub r: usize,
}

fn classify_edges(n: usize, edges: &[(usize, usize)]) -> Option<FactorClassShape> {
    let comps = components(n, edges);
    let mut comp_of = vec![0usize; n + 1];
    for (c, vs) in comps.iter().enumerate() {
        for &v in vs {
            comp_of[v] = c;
        }
    }
    let mut edge_count = vec![0usize; comps.len()];
    for &(u, _) in edges {
        edge_count[comp_of[u]] += 1;
    }
    if comps.iter().zip(&edge_count).any(|(vs, &e)| e != vs.len() * (vs.len() - 1) / 2) {
        return None;
    }
    let lo = comps.iter().map(Vec::len).min()?;
    let hi = comps.iter().map(Vec::len).max()?;
    if hi > lo + 1 {
        return None;
    }
    let r = if hi == lo { 0 } else { comps.iter().filter(|c| c.len() == hi).count() };
    Some(FactorClassShape { n: comps.len(), q: lo, r })
}

/// Shape of `g` when every component is a clique of one of two adjacent sizes.
pub fn classify_factor(g: &Graph) -> Option<FactorClassShape> {
    classify_edges(g.n(), &g.edges())
}

/// `R̄(n_1 + 1, ..., n_k + 1) = N + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenFactorable {
    pub query: Query,
    pub value: u32,
    pub shapes: Vec<FactorClassShape>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("inapplicable: {reason}")]
pub struct Inapplicable {
    pub reason: String,
}

/// Exact value certified by a factorization whose factors all have clique shapes,
/// provided `(n_i - r_i - 1) q_i > 0` for some factor.
pub fn gen_factorable_value(f: &Factorization) -> std::result::Result<GenFactorable, Inapplicable> {
    let mut shapes = Vec::with_capacity(f.k());
    for (i, s) in f.shapes().into_iter().enumerate() {
        match s {
            Some(s) => shapes.push(s),
            None => {
                return Err(Inapplicable {
                    reason: format!("factor {} is not a union of cliques of two adjacent sizes", i + 1),
                })
            }
        }
    }
    if !shapes.iter().any(|s| s.n > s.r + 1 && s.q > 0) {
        return Err(Inapplicable { reason: "(n_i - r_i - 1) q_i = 0 for every factor".into() });
    }
    let query = Query::new(shapes.iter().map(|s| s.n as u32 + 1).collect())
        .map_err(|e| Inapplicable { reason: e.to_string() })?;
    Ok(GenFactorable { query, value: f.n() as u32 + 1, shapes })
}

/// Circle method: vertex `N` fixed, `1..N-1` rotated.
pub fn round_robin(n: usize) -> Result<Factorization> {
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n == 0 {
        return Err(Error::BadArgs("order must be at least 2".into()));
    }
    let m = n - 1;
    let factors = (0..m)
        .map(|r| {
            let mut f = vec![(r + 1, n)];
            for j in 1..n / 2 {
                f.push(((r + j) % m + 1, (r + m - j) % m + 1));
            }
            f
        })
        .collect();
    Factorization::new(n, factors)
}

/// `C(mn + r, 2) / (r C(m+1, 2) + (n - r) C(m, 2))`.
pub fn n_mnr(m: u64, n: u64, r: u64) -> Result<Ratio<u64>> {
    if m == 0 || r >= n {
        return Err(Error::BadArgs(format!("need m >= 1 and 0 <= r < n, got m={m} n={n} r={r}")));
    }
    let c2 = |x: u64| x * x.saturating_sub(1) / 2;
    let den = r * c2(m + 1) + (n - r) * c2(m);
    if den == 0 {
        return Err(Error::BadArgs(format!("zero denominator for m={m} n={n} r={r}")));
    }
    Ok(Ratio::new(c2(m * n + r), den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::clique_union;

    #[test]
    fn round_robin_examples() {
        let f = round_robin(4).unwrap();
        assert_eq!(f.k(), 3);
        for i in 0..3 {
            assert_eq!(f.factor_edges(i).len(), 2);
        }
        assert_eq!(round_robin(2).unwrap().factor_edges(0), &[(1, 2)]);
        assert!(matches!(round_robin(7), Err(Error::OddOrder(7))));
        for n in (2..=40).step_by(2) {
            let f = round_robin(n).unwrap();
            assert_eq!(f.k(), n - 1);
            for s in f.shapes() {
                assert_eq!(s, Some(FactorClassShape { n: n / 2, q: 2, r: 0 }));
            }
        }
        let f = round_robin(10).unwrap();
        for i in 0..9 {
            assert_eq!(f.factor_graph(i).unwrap().independence_number(), 5);
        }
    }

    #[test]
    fn round_robin_certifies() {
        let g = gen_factorable_value(&round_robin(10).unwrap()).unwrap();
        assert_eq!(g.query, Query::uniform(6, 9).unwrap());
        assert_eq!(g.value, 11);
    }

    #[test]
    fn validation() {
        assert!(Factorization::new(3, vec![vec![(1, 2)], vec![(2, 3)]]).is_err());
        assert!(Factorization::new(3, vec![vec![(1, 2), (2, 3)], vec![(3, 2), (1, 3)]]).is_err());
        assert!(Factorization::new(3, vec![vec![(1, 2), (2, 3)], vec![(1, 4)]]).is_err());
        assert!(Factorization::new(3, vec![vec![(1, 2), (2, 3)], vec![(3, 1)]]).is_ok());
    }

    #[test]
    fn classify_examples() {
        let g = clique_union(&[3, 3, 3]).unwrap();
        assert_eq!(classify_factor(&g), Some(FactorClassShape { n: 3, q: 3, r: 0 }));
        let g = clique_union(&[3, 2, 2, 2]).unwrap();
        assert_eq!(classify_factor(&g), Some(FactorClassShape { n: 4, q: 2, r: 1 }));
        let p3 = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(classify_factor(&p3), None);
        let g = clique_union(&[4, 2]).unwrap();
        assert_eq!(classify_factor(&g), None);
        // Isolated vertices are K_1 components.
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(classify_factor(&g), Some(FactorClassShape { n: 2, q: 1, r: 1 }));
    }

    #[test]
    fn single_factor_is_inapplicable() {
        let k4 = Factorization::new(4, vec![Graph::complete(4).unwrap().edges()]).unwrap();
        let err = gen_factorable_value(&k4).unwrap_err();
        assert!(err.reason.contains("= 0"));
        let bad = Factorization::new(3, vec![vec![(1, 2), (2, 3)], vec![(1, 3)]]).unwrap();
        assert!(gen_factorable_value(&bad).is_err());
    }

    #[test]
    fn n_mnr_examples() {
        for n in 1..20 {
            assert_eq!(n_mnr(2, n, 0).unwrap(), Ratio::from_integer(2 * n - 1));
        }
        assert_eq!(n_mnr(3, 3, 0).unwrap(), Ratio::from_integer(4));
        // 78 / (1·10 + 2·6).
        assert_eq!(n_mnr(4, 3, 1).unwrap(), Ratio::new(39, 11));
        assert!(n_mnr(3, 3, 3).is_err());
        assert!(n_mnr(0, 3, 0).is_err());
        assert!(n_mnr(1, 3, 0).is_err());
    }

    #[test]
    fn json_round_trip_and_coloring() {
        let f = round_robin(6).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        assert!(text.starts_with("{\"N\":6,\"factors\":[[[3,4],[2,5],[1,6]],"), "{text}");
        let back: FactorizationJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Factorization::from_json(&back).unwrap(), f);
        let c = f.to_coloring().unwrap();
        assert_eq!(c.alpha_vector(), vec![3; 5]);
        assert_eq!(Factorization::from_coloring(&c).unwrap(), f);
    }
}
