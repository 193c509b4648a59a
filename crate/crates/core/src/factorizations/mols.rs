//! Latin squares read off resolvable colorings of `K_{n^2}`, and the inverse encoding.

use super::{classify_edges, components, Factorization, FactorClassShape};
use crate::colorings::EdgeColoring;
use crate::error::{Error, Result};

/// `square[row][col]` is a symbol in `0..n`.
pub type LatinSquare = Vec<Vec<usize>>;

pub fn is_latin(s: &LatinSquare) -> bool {
    let n = s.len();
    let perm = |xs: Vec<usize>| {
        let mut seen = vec![false; n];
        xs.into_iter().all(|x| x < n && !std::mem::replace(&mut seen[x], true))
    };
    s.iter().all(|r| r.len() == n)
        && (0..n).all(|i| perm(s[i].clone()))
        && (0..n).all(|j| perm((0..n).map(|i| s[i][j]).collect()))
}

/// Every ordered symbol pair appears exactly once when the squares are superimposed.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let mut seen = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a[i][j], b[i][j]);
            if x >= n || y >= n || std::mem::replace(&mut seen[x * n + y], true) {
                return false;
            }
        }
    }
    true
}

/// Squares from a coloring of `K_{n^2}` with `n + 1` colors, every class `nK_n`.
/// Class 1 parts are rows, class 2 parts columns; parts are numbered by smallest vertex.
pub fn mols_extract(f: &EdgeColoring) -> Result<Vec<LatinSquare>> {
    let nn = f.n();
    let n = (nn as f64).sqrt().round() as usize;
    if n * n != nn || n < 2 {
        return Err(Error::BadArgs(format!("order {nn} is not a square of at least 4")));
    }
    if f.k() != n + 1 {
        return Err(Error::BadArgs(format!("need {} colors on K_{nn}, found {}", n + 1, f.k())));
    }
    let fact = Factorization::from_coloring(f)?;
    let mut part_of = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if classify_edges(nn, fact.factor_edges(i)) != Some(FactorClassShape { n, q: n, r: 0 }) {
            return Err(Error::NotResolvable(i + 1));
        }
        let mut idx = vec![0usize; nn + 1];
        for (p, part) in components(nn, fact.factor_edges(i)).iter().enumerate() {
            for &v in part {
                idx[v] = p;
            }
        }
        part_of.push(idx);
    }
    let mut cell = vec![vec![0usize; n]; n];
    let mut filled = vec![vec![false; n]; n];
    for v in 1..=nn {
        let (r, c) = (part_of[0][v], part_of[1][v]);
        if std::mem::replace(&mut filled[r][c], true) {
            return Err(Error::NotGrid(format!("row {} and column {} share more than one vertex", r + 1, c + 1)));
        }
        cell[r][c] = v;
    }
    Ok((2..=n)
        .map(|i| (0..n).map(|r| (0..n).map(|c| part_of[i][cell[r][c]]).collect()).collect())
        .collect())
}

/// Cell `(r, c)` becomes vertex `r n + c + 1`; colors are rows, columns, then one per square.
pub fn mols_to_coloring(squares: &[LatinSquare]) -> Result<EdgeColoring> {
    let n = squares.first().map(Vec::len).ok_or_else(|| Error::BadArgs("no squares".into()))?;
    for (i, s) in squares.iter().enumerate() {
        if s.len() != n || !is_latin(s) {
            return Err(Error::BadArgs(format!("square {} is not Latin of order {n}", i + 1)));
        }
    }
    let v = |r: usize, c: usize| r * n + c + 1;
    let group = |key: &dyn Fn(usize, usize) -> usize| -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..n * n {
            for b in a + 1..n * n {
                if key(a / n, a % n) == key(b / n, b % n) {
                    edges.push((v(a / n, a % n), v(b / n, b % n)));
                }
            }
        }
        edges
    };
    let mut classes = vec![group(&|r, _| r), group(&|_, c| c)];
    for s in squares {
        classes.push(group(&|r, c| s[r][c]));
    }
    let fact = Factorization::new(n * n, classes)
        .map_err(|e| Error::BadArgs(format!("squares are not a complete orthogonal set: {e}")))?;
    fact.to_coloring()
}
