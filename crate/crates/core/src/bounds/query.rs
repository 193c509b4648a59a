use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A threshold multiset `(m_1, ..., m_k)`, kept sorted non-increasing.
///
/// The value is invariant under permuting the thresholds, so the sorted form is
/// the only one ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Query(Vec<u32>);

impl Query {
    pub fn new(mut m: Vec<u32>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::BadArgs("a query needs at least one threshold".into()));
        }
        if m.contains(&0) {
            return Err(Error::BadArgs("thresholds must be positive".into()));
        }
        m.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Query(m))
    }

    /// `(m; k)`: the threshold `m` repeated `k` times.
    pub fn uniform(m: u32, k: usize) -> Result<Self> {
        Query::new(vec![m; k])
    }

    pub fn thresholds(&self) -> &[u32] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn min(&self) -> u32 {
        *self.0.last().unwrap()
    }

    pub fn max(&self) -> u32 {
        self.0[0]
    }

    /// `Some(m)` when all thresholds equal `m`.
    pub fn uniform_value(&self) -> Option<u32> {
        (self.0[0] == self.min()).then_some(self.0[0])
    }

    /// The query with position `i` removed (`None` when that would leave nothing).
    pub fn without(&self, i: usize) -> Option<Query> {
        if self.0.len() < 2 {
            return None;
        }
        let mut m = self.0.clone();
        m.remove(i);
        Some(Query(m))
    }

    pub fn with(&self, extra: u32) -> Result<Query> {
        let mut m = self.0.clone();
        m.push(extra);
        Query::new(m)
    }

    /// Componentwise `self <= other` (same `k`). For sorted vectors this is the
    /// same as domination under some matching of the colors.
    pub fn dominated_by(&self, other: &Query) -> bool {
        self.k() == other.k() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Sort key: `k` first, then thresholds lexicographically.
    pub fn order_key(&self) -> (usize, &[u32]) {
        (self.k(), &self.0)
    }
}

impl TryFrom<Vec<u32>> for Query {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Query::new(v)
    }
}

impl From<Query> for Vec<u32> {
    fn from(q: Query) -> Self {
        q.0
    }
}

impl PartialOrd for Query {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Query {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.uniform_value() {
            Some(m) if self.k() > 2 => write!(f, "({m};{})", self.k()),
            _ => {
                let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

impl fmt::Debug for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
