//! Small finite fields and the parallel classes of affine planes over them.

use super::Factorization;
use crate::error::{Error, Result};

/// Orders with a built-in field.
pub const AFFINE_ORDERS: &[usize] = &[2, 3, 4, 5, 7, 8, 9];

/// `GF(p^d)` with elements `0..q` read as base-`p` coefficient vectors.
#[derive(Clone, Debug)]
pub struct GaloisField {
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
}

impl GaloisField {
    pub fn new(q: usize) -> Result<Self> {
        // (p, d, monic modulus coefficients, low degree first, without the leading 1)
        let (p, d, modulus): (usize, usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q, 1, &[0]),
            4 => (2, 2, &[1, 1]),
            8 => (2, 3, &[1, 1, 0]),
            9 => (3, 2, &[1, 0]),
            _ => return Err(Error::UnsupportedOrder(q)),
        };
        let digits = |x: usize| -> Vec<usize> { (0..d).map(|i| x / p.pow(i as u32) % p).collect() };
        let value = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &a| acc * p + a) };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = value(&s);
                let mut prod = vec![0usize; 2 * d];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // x^d = -(modulus) reduces higher terms.
                for deg in (d..2 * d).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    prod[deg] = 0;
                    for (i, &m) in modulus.iter().enumerate() {
                        let t = deg - d + i;
                        prod[t] = (prod[t] + c * (p - m % p)) % p;
                    }
                }
                mul[a * q + b] = value(&prod[..d]);
            }
        }
        Ok(GaloisField { q, add, mul })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }
}

/// `K_{q^2}` on the points `(a, b)`, vertex `a q + b + 1`, split into the `q + 1`
/// parallel classes: vertical lines, then slopes `0, 1, ..., q - 1`.
pub fn affine_factorization(q: usize) -> Result<Factorization> {
    let f = GaloisField::new(q)?;
    let vertex = |a: usize, b: usize| a * q + b + 1;
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::with_capacity(q + 1);
    classes.push((0..q).map(|a| (0..q).map(|b| vertex(a, b)).collect()).collect());
    for s in 0..q {
        // Line y = s x + c.
        let lines = (0..q).map(|c| (0..q).map(|x| vertex(x, f.add(f.mul(s, x), c))).collect()).collect();
        classes.push(lines);
    }
    let factors = classes
        .into_iter()
        .map(|lines: Vec<Vec<usize>>| {
            lines
                .iter()
                .flat_map(|l| {
                    l.iter().enumerate().flat_map(move |(i, &u)| l[i + 1..].iter().map(move |&v| (u.min(v), u.max(v))))
                })
                .collect()
        })
        .collect();
    Factorization::new(q * q, factors)
}

#[cfg(test)]
mod tests {
    use super::super::{gen_factorable_value, FactorClassShape};
    use super::*;
    use crate::bounds::Query;

    #[test]
    fn field_axioms() {
        for &q in AFFINE_ORDERS {
            let f = GaloisField::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!((0..q).filter(|&b| f.mul(a, b) == 1).count(), 1, "q={q} a={a}");
                }
                assert_eq!((0..q).filter(|&b| f.add(a, b) == 0).count(), 1);
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
        assert!(matches!(GaloisField::new(6), Err(Error::UnsupportedOrder(6))));
    }

    #[test]
    fn planes() {
        for &q in AFFINE_ORDERS {
            let f = affine_factorization(q).unwrap();
            assert_eq!((f.n(), f.k()), (q * q, q + 1));
            for s in f.shapes() {
                assert_eq!(s, Some(FactorClassShape { n: q, q, r: 0 }));
            }
        }
        assert!(matches!(affine_factorization(6), Err(Error::UnsupportedOrder(6))));
    }

    #[test]
    fn plane_values() {
        let g = gen_factorable_value(&affine_factorization(3).unwrap()).unwrap();
        assert_eq!((g.query, g.value), (Query::uniform(4, 4).unwrap(), 10));
        let g = gen_factorable_value(&affine_factorization(5).unwrap()).unwrap();
        assert_eq!((g.query, g.value), (Query::uniform(6, 6).unwrap(), 26));
        let g = gen_factorable_value(&affine_factorization(9).unwrap()).unwrap();
        assert_eq!((g.query, g.value), (Query::uniform(10, 10).unwrap(), 82));
    }

    #[test]
    fn two_points_share_one_line() {
        for &q in &[2usize, 3, 4] {
            let f = affine_factorization(q).unwrap();
            let mut count = vec![vec![0; q * q + 1]; q * q + 1];
            for i in 0..f.k() {
                for line in f.components(i) {
                    for (a, &u) in line.iter().enumerate() {
                        for &v in &line[a + 1..] {
                            count[u][v] += 1;
                        }
                    }
                }
            }
            for u in 1..=q * q {
                for v in u + 1..=q * q {
                    assert_eq!(count[u][v], 1);
                }
            }
        }
    }
}
