//! Provenance steps and their replay.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CertificateKind, Interval, ColorPartition, Query};
use crate::turan::tbar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "R-one")]
    One,
    #[serde(rename = "R-k1")]
    K1,
    #[serde(rename = "R-min")]
    Min,
    #[serde(rename = "R-low")]
    Low,
    #[serde(rename = "R-base")]
    Base,
    #[serde(rename = "R-two")]
    Two,
    #[serde(rename = "R-cert")]
    Cert,
    #[serde(rename = "R-ext")]
    Ext,
    #[serde(rename = "R-rh")]
    Rh,
    #[serde(rename = "R-mono")]
    Mono,
    #[serde(rename = "R-drop")]
    Drop,
    #[serde(rename = "R-part")]
    Part,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::One => "R-one",
            Rule::K1 => "R-k1",
            Rule::Min => "R-min",
            Rule::Low => "R-low",
            Rule::Base => "R-base",
            Rule::Two => "R-two",
            Rule::Cert => "R-cert",
            Rule::Ext => "R-ext",
            Rule::Rh => "R-rh",
            Rule::Mono => "R-mono",
            Rule::Drop => "R-drop",
            Rule::Part => "R-part",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conclusion {
    Lo(u32),
    Hi(u32),
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Lo(v) => write!(f, "lo >= {v}"),
            Conclusion::Hi(v) => write!(f, "hi <= {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Premise {
    /// Another query with the interval it had when the step fired.
    Query { query: Query, interval: Interval },
    Certificate { id: String, query: Query, lo: Option<u32>, hi: Option<u32> },
    Table { a: u32, b: u32, interval: Interval, source: String },
    /// A user-supplied `R(H; k)` value bounding `(m; k)` from above.
    Side { query: Query, value: u32 },
}

impl Premise {
    pub(crate) fn certificate(id: &str, query: &Query, kind: CertificateKind) -> Premise {
        let (lo, hi) = match kind {
            CertificateKind::Lower { n } => (Some(n + 1), None),
            CertificateKind::Upper { n } => (None, Some(n)),
            CertificateKind::Exact { value } => (Some(value), Some(value)),
        };
        Premise::Certificate { id: id.to_string(), query: query.clone(), lo, hi }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProvenanceStep {
    pub rule: Rule,
    pub query: Query,
    pub conclusion: Conclusion,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Premise>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<ColorPartition>,
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Least `n <= cap` with `k * tbar(n, m - 1) > C(n, 2)`.
pub(crate) fn ext_value(m: u32, k: usize, cap: u32) -> Option<u32> {
    if m < 2 {
        return None;
    }
    (1..=cap).find(|&n| k as u64 * tbar(n as u64, m as u64 - 1).unwrap() > choose2(n as u64))
}

/// `(lo, hi)` from equal thresholds alone.
pub(crate) fn low_value(m: u32, k: usize) -> (u32, Option<u32>) {
    if k as u64 <= choose2(m as u64) {
        (m + 1, None)
    } else {
        (m, Some(m))
    }
}

fn is_drop_of(big: &Query, small: &Query) -> Vec<u32> {
    // Values x with big = small + {x}.
    let mut out = Vec::new();
    if big.k() != small.k() + 1 {
        return out;
    }
    for i in 0..big.k() {
        if big.without(i).as_ref() == Some(small) {
            let x = big.thresholds()[i];
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

impl ProvenanceStep {
    /// Recomputes what the rule yields from the recorded premises alone, as `(lo, hi)`.
    pub fn derive(&self) -> Option<(Option<u32>, Option<u32>)> {
        let q = &self.query;
        let m = q.thresholds();
        let k = q.k();
        match self.rule {
            Rule::One => q.min().eq(&1).then_some((Some(1), Some(1))),
            Rule::K1 => (k == 1 && m[0] >= 2).then_some((Some(m[0]), None)),
            Rule::Min => {
                if k < 2 || q.min() != 2 {
                    return None;
                }
                let v = Query::min(&q.without(k - 1)?);
                Some((Some(v), Some(v)))
            }
            Rule::Low => {
                let v = q.uniform_value()?;
                let (lo, hi) = low_value(v, k);
                Some((Some(lo), hi))
            }
            Rule::Base => Some((Some(q.min()), None)),
            Rule::Ext => {
                let v = q.uniform_value()?;
                let Conclusion::Hi(claimed) = self.conclusion else { return None };
                Some((None, Some(ext_value(v, k, claimed)?)))
            }
            Rule::Two => match self.premises.as_slice() {
                [Premise::Table { a, b, interval, .. }] if k == 2 && ((*a, *b) == (m[1], m[0]) || (*b, *a) == (m[1], m[0])) => {
                    Some((Some(interval.lo), interval.hi))
                }
                _ => None,
            },
            Rule::Cert => match self.premises.as_slice() {
                [Premise::Certificate { query, lo, hi, .. }] if query == q => Some((*lo, *hi)),
                _ => None,
            },
            Rule::Rh => match self.premises.as_slice() {
                [Premise::Side { query, value }] if query == q && q.uniform_value().is_some() => {
                    Some((None, Some(*value)))
                }
                _ => None,
            },
            Rule::Mono => match self.premises.as_slice() {
                [Premise::Query { query: p, interval }] if p != q => {
                    if p.dominated_by(q) {
                        Some((Some(interval.lo), None))
                    } else if q.dominated_by(p) {
                        Some((None, interval.hi))
                    } else {
                        None
                    }
                }
                _ => None,
            },
            Rule::Drop => match self.premises.as_slice() {
                [Premise::Query { query: p, interval }] => {
                    if p.k() + 1 == k {
                        let xs = is_drop_of(q, p);
                        if xs.is_empty() {
                            return None;
                        }
                        let lo = match interval.hi {
                            Some(h) if xs.iter().any(|&x| x >= h) => Some(interval.lo),
                            _ => None,
                        };
                        Some((lo, interval.hi))
                    } else if p.k() == k + 1 {
                        (!is_drop_of(p, q).is_empty()).then_some((Some(interval.lo), None))
                    } else {
                        None
                    }
                }
                _ => None,
            },
            Rule::Part => {
                let part = self.partition.as_ref()?;
                let subs = part.sub_thresholds(q).ok()?;
                if subs.len() != self.premises.len() {
                    return None;
                }
                let mut sum = 0u32;
                for (sub, prem) in subs.into_iter().zip(&self.premises) {
                    let Premise::Query { query, interval } = prem else { return None };
                    if sub.contains(&1) {
                        if interval.hi != Some(1) || query.min() != 1 {
                            return None;
                        }
                    } else if *query != Query::new(sub).ok()? {
                        return None;
                    }
                    sum += interval.hi?;
                }
                Some((None, Some(sum + 2 - part.t() as u32)))
            }
        }
    }

    /// Whether the recorded conclusion is exactly what the premises yield.
    pub fn replays(&self) -> bool {
        match (self.derive(), self.conclusion) {
            (Some((Some(lo), _)), Conclusion::Lo(v)) => lo == v,
            (Some((_, Some(hi))), Conclusion::Hi(v)) => hi == v,
            _ => false,
        }
    }
}

impl fmt::Display for ProvenanceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.query, self.rule, self.conclusion)?;
        if let Some(p) = &self.partition {
            write!(f, " via {p}")?;
        }
        let mut sep = " from ";
        for p in &self.premises {
            f.write_str(sep)?;
            sep = ", ";
            match p {
                Premise::Query { query, interval } => write!(f, "{query}={interval}")?,
                Premise::Certificate { id, .. } => write!(f, "certificate {id}")?,
                Premise::Table { a, b, interval, source } => write!(f, "R({a},{b})={interval} [{source}]")?,
                Premise::Side { value, .. } => write!(f, "side table {value}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_examples() {
        // tbar(6, 4) = 2 > 15/8.
        assert_eq!(ext_value(5, 8, 512), Some(6));
        assert_eq!(ext_value(6, 10, 512), Some(8));
        assert_eq!(ext_value(6, 8, 512), Some(11));
        assert_eq!(ext_value(3, 1, 512), None);
        assert_eq!(ext_value(2, 2, 512), Some(2));
    }

    #[test]
    fn low_examples() {
        assert_eq!(low_value(4, 7), (4, Some(4)));
        assert_eq!(low_value(4, 6), (5, None));
        assert_eq!(low_value(5, 11), (5, Some(5)));
        assert_eq!(low_value(2, 1), (3, None));
    }

    #[test]
    fn tampered_steps_do_not_replay() {
        let q = Query::new(vec![4, 4, 4]).unwrap();
        let step = ProvenanceStep {
            rule: Rule::Drop,
            query: q.clone(),
            conclusion: Conclusion::Hi(18),
            premises: vec![Premise::Query { query: Query::new(vec![4, 4]).unwrap(), interval: Interval::exact(18) }],
            partition: None,
        };
        assert!(step.replays());
        let mut bad = step.clone();
        bad.conclusion = Conclusion::Hi(17);
        assert!(!bad.replays());
        let mut bad = step;
        bad.premises = vec![Premise::Query { query: Query::new(vec![4, 3]).unwrap(), interval: Interval::exact(9) }];
        assert!(!bad.replays());
    }
}
