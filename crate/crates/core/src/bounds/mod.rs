//! Interval bounds on `R̄(m_1, ..., m_k)` derived by a fixpoint over sound rules,
//! each improvement carrying a replayable provenance step.

mod certificate;
mod engine;
mod provenance;
mod query;
mod table;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use certificate::{Certificate, CertificateJson, CertificateKind, CertificateRegistry, BUILTIN_ROUND_ROBIN_MAX};
pub use engine::{bound, Bound, Derivation, Engine, EngineConfig, RhEntry};
pub use provenance::{Conclusion, Premise, ProvenanceStep, Rule};
pub use query::Query;
pub use table::{load_ramsey_table, RamseyEntry, RamseyEntryJson, RamseyTable};

use crate::error::{Error, Result};

/// `[lo, hi]` with `hi = None` meaning unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl Interval {
    pub fn exact(v: u32) -> Self {
        Interval { lo: v, hi: Some(v) }
    }

    pub fn unbounded(lo: u32) -> Self {
        Interval { lo, hi: None }
    }

    pub fn is_exact(&self) -> bool {
        self.hi == Some(self.lo)
    }

    pub fn value(&self) -> Option<u32> {
        self.is_exact().then_some(self.lo)
    }

    pub fn contains(&self, v: u32) -> bool {
        self.lo <= v && self.hi.is_none_or(|h| v <= h)
    }

    /// `self` is at least as tight as `other` on both ends.
    pub fn within(&self, other: &Interval) -> bool {
        self.lo >= other.lo && match (self.hi, other.hi) {
            (_, None) => true,
            (Some(a), Some(b)) => a <= b,
            (None, Some(_)) => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{},{}]", self.lo, h),
            None => write!(f, "[{},inf)", self.lo),
        }
    }
}

/// A partition of the color positions `1..=k` into `t >= 2` nonempty parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionJson", into = "PartitionJson")]
pub struct ColorPartition {
    k: usize,
    /// 0-based positions, each part sorted, parts ordered by first element.
    parts: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    k: usize,
    parts: Vec<Vec<usize>>,
}

impl TryFrom<PartitionJson> for ColorPartition {
    type Error = Error;
    fn try_from(p: PartitionJson) -> Result<Self> {
        ColorPartition::new(p.k, p.parts)
    }
}

impl From<ColorPartition> for PartitionJson {
    fn from(p: ColorPartition) -> Self {
        PartitionJson { k: p.k, parts: p.parts_one_based() }
    }
}

impl ColorPartition {
    /// Parts are given with 1-based positions.
    pub fn new(k: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::BadArgs("a partition needs at least two parts".into()));
        }
        let mut seen = vec![false; k];
        let mut zero_based = Vec::with_capacity(parts.len());
        for part in parts {
            if part.is_empty() {
                return Err(Error::BadArgs("partition parts must be nonempty".into()));
            }
            let mut p = Vec::with_capacity(part.len());
            for i in part {
                if i == 0 || i > k {
                    return Err(Error::BadColor { color: i, k });
                }
                if std::mem::replace(&mut seen[i - 1], true) {
                    return Err(Error::BadArgs(format!("position {i} appears twice")));
                }
                p.push(i - 1);
            }
            p.sort_unstable();
            zero_based.push(p);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::BadArgs(format!("position {} is in no part", i + 1)));
        }
        zero_based.sort();
        Ok(ColorPartition { k, parts: zero_based })
    }

    /// `{1} | {2} | ... | {k}`.
    pub fn singletons(k: usize) -> Result<Self> {
        ColorPartition::new(k, (1..=k).map(|i| vec![i]).collect())
    }

    /// Every partition of `1..=k` with at least two parts, by restricted growth strings.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if k < 2 {
            return out;
        }
        let mut rgs = vec![0usize; k];
        loop {
            let t = rgs.iter().max().unwrap() + 1;
            if t >= 2 {
                let mut parts = vec![Vec::new(); t];
                for (i, &b) in rgs.iter().enumerate() {
                    parts[b].push(i);
                }
                out.push(ColorPartition { k, parts });
            }
            // Next restricted growth string.
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return out;
                }
                let bound = rgs[..i].iter().max().unwrap() + 1;
                if rgs[i] < bound {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                    break;
                }
                i -= 1;
            }
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.parts.len()
    }

    pub fn parts_one_based(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.iter().map(|i| i + 1).collect()).collect()
    }

    /// For each part `M_j`, the thresholds `m_i` for `i` in `M_j` and `m_i - 1` otherwise.
    pub fn sub_thresholds(&self, q: &Query) -> Result<Vec<Vec<u32>>> {
        if q.k() != self.k {
            return Err(Error::BadArgs(format!("partition of {} positions applied to k = {}", self.k, q.k())));
        }
        if q.min() < 2 {
            return Err(Error::BadArgs("partition bounds need every threshold >= 2".into()));
        }
        let m = q.thresholds();
        Ok(self
            .parts
            .iter()
            .map(|part| (0..self.k).map(|i| if part.contains(&i) { m[i] } else { m[i] - 1 }).collect())
            .collect())
    }
}

impl fmt::Display for ColorPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts_one_based()
            .iter()
            .map(|p| format!("{{{}}}", p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        f.write_str(&parts.join("|"))
    }
}

/// `sum_j hi(m^(j)) - t + 2`. Sub-queries containing a 1 count as 1.
pub fn partition_bound(q: &Query, p: &ColorPartition, solved: &HashMap<Query, Interval>) -> Result<u32> {
    let mut sum = 0u32;
    for sub in p.sub_thresholds(q)? {
        if sub.contains(&1) {
            sum += 1;
            continue;
        }
        let sq = Query::new(sub)?;
        match solved.get(&sq).and_then(|b| b.hi) {
            Some(h) => sum += h,
            None => return Err(Error::MissingPremise(sq.to_string())),
        }
    }
    Ok(sum + 2 - p.t() as u32)
}
