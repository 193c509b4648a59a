//! Externally established facts about single queries: witness colorings,
//! factorizations, and completed searches.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::Query;
use crate::colorings::{verify_witness, witness_library, Witness};
use crate::error::{Error, Result};
use crate::factorizations::{affine_factorization, gen_factorable_value, round_robin, GenFactorable, AFFINE_ORDERS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CertificateKind {
    /// `R̄(q) > n`.
    Lower { n: u32 },
    /// `R̄(q) <= n`.
    Upper { n: u32 },
    /// `R̄(q) = value`.
    Exact { value: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub id: String,
    pub query: Query,
    pub kind: CertificateKind,
    pub source: String,
    /// Path of a supporting witness or factorization file, when there is one.
    pub artifact: Option<String>,
}

impl Certificate {
    pub fn lower(id: impl Into<String>, query: Query, n: u32, source: impl Into<String>) -> Self {
        Certificate { id: id.into(), query, kind: CertificateKind::Lower { n }, source: source.into(), artifact: None }
    }

    pub fn upper(id: impl Into<String>, query: Query, n: u32, source: impl Into<String>) -> Self {
        Certificate { id: id.into(), query, kind: CertificateKind::Upper { n }, source: source.into(), artifact: None }
    }

    pub fn exact(id: impl Into<String>, query: Query, value: u32, source: impl Into<String>) -> Self {
        Certificate {
            id: id.into(),
            query,
            kind: CertificateKind::Exact { value },
            source: source.into(),
            artifact: None,
        }
    }

    pub fn with_artifact(mut self, path: impl Into<String>) -> Self {
        self.artifact = Some(path.into());
        self
    }

    /// Lower bound from a witness whose alpha vector checks out.
    pub fn from_witness(w: &Witness) -> Result<Self> {
        let report = verify_witness(w);
        if !report.ok {
            return Err(Error::InvalidColoring(format!(
                "witness {}: expected alpha {:?}, found {:?}",
                w.id, report.expected_alpha, report.alpha
            )));
        }
        Ok(Certificate::lower(w.id.clone(), report.certifies, report.n as u32, "witness"))
    }

    pub fn from_gen_factorable(id: impl Into<String>, g: &GenFactorable) -> Self {
        Certificate::exact(id, g.query.clone(), g.value, "gen_factorable")
    }

    pub fn to_json(&self) -> CertificateJson {
        let (mut exact, mut lo, mut hi) = (None, None, None);
        match self.kind {
            CertificateKind::Lower { n } => lo = Some(n + 1),
            CertificateKind::Upper { n } => hi = Some(n),
            CertificateKind::Exact { value } => exact = Some(value),
        }
        let (mut factorization, mut witness) = (None, None);
        if let Some(a) = &self.artifact {
            if self.source == "gen_factorable" {
                factorization = Some(a.clone());
            } else {
                witness = Some(a.clone());
            }
        }
        CertificateJson {
            id: Some(self.id.clone()),
            query: self.query.clone(),
            exact,
            lo,
            hi,
            source: self.source.clone(),
            factorization,
            witness,
        }
    }

    pub fn from_json(doc: &CertificateJson, fallback_id: &str) -> Result<Self> {
        let kind = match (doc.exact, doc.lo, doc.hi) {
            (Some(v), None, None) => CertificateKind::Exact { value: v },
            (None, Some(lo), None) if lo >= 1 => CertificateKind::Lower { n: lo - 1 },
            (None, None, Some(hi)) => CertificateKind::Upper { n: hi },
            _ => return Err(Error::parse(fallback_id, "a certificate carries exactly one of exact, lo, hi")),
        };
        Ok(Certificate {
            id: doc.id.clone().unwrap_or_else(|| fallback_id.to_string()),
            query: doc.query.clone(),
            kind,
            source: doc.source.clone(),
            artifact: doc.factorization.clone().or_else(|| doc.witness.clone()),
        })
    }
}

/// `{"query":[4,4,4,4], "exact":10, "source":"gen_factorable", "factorization":"<path>"}`.
/// `lo` means `R̄ >= lo`, `hi` means `R̄ <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub query: Query,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<u32>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateRegistry {
    certs: Vec<Certificate>,
}

/// Round-robin factorizations are registered up to this order.
pub const BUILTIN_ROUND_ROBIN_MAX: usize = 40;

impl CertificateRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Built-in witnesses, round-robin 1-factorizations of `K_4 ... K_40`, and the
    /// affine planes of the supported orders.
    pub fn builtin() -> Self {
        let mut r = CertificateRegistry::new();
        r.add_witnesses();
        r.add_constructions();
        r
    }

    pub fn add_witnesses(&mut self) {
        for w in witness_library() {
            self.add(Certificate::from_witness(&w).expect("built-in witnesses verify"));
        }
    }

    pub fn add_constructions(&mut self) {
        for order in (4..=BUILTIN_ROUND_ROBIN_MAX).step_by(2) {
            let f = round_robin(order).expect("even order");
            if let Ok(g) = gen_factorable_value(&f) {
                self.add(Certificate::from_gen_factorable(format!("round_robin({order})"), &g));
            }
        }
        for &q in AFFINE_ORDERS {
            let f = affine_factorization(q).expect("supported order");
            if let Ok(g) = gen_factorable_value(&f) {
                self.add(Certificate::from_gen_factorable(format!("affine_plane({q})"), &g));
            }
        }
    }

    /// Adds a certificate unless an identical one is present.
    pub fn add(&mut self, c: Certificate) {
        if !self.certs.iter().any(|x| x.query == c.query && x.kind == c.kind) {
            self.certs.push(c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Certificate> {
        self.certs.iter()
    }

    pub fn len(&self) -> usize {
        self.certs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.certs.is_empty()
    }

    pub fn for_query(&self, q: &Query) -> Vec<&Certificate> {
        self.certs.iter().filter(|c| &c.query == q).collect()
    }

    /// Loads every `cert_*.json` in `dir` (missing directory: nothing).
    pub fn load_dir(&mut self, dir: &Path) -> Result<usize> {
        let entries = match std::fs::read_dir(dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(Error::io(dir, e)),
        };
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name().and_then(|s| s.to_str()).is_some_and(|s| s.starts_with("cert_") && s.ends_with(".json"))
            })
            .collect();
        paths.sort();
        for p in &paths {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            let doc: CertificateJson = serde_json::from_str(&text)
                .map_err(|e| Error::parse(format!("{}:{}:{}", p.display(), e.line(), e.column()), e.to_string()))?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("cert");
            self.add(Certificate::from_json(&doc, stem)?);
        }
        Ok(paths.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_contents() {
        let r = CertificateRegistry::builtin();
        let q = |v: Vec<u32>| Query::new(v).unwrap();
        let w2: Vec<_> = r.for_query(&q(vec![7, 4, 3]));
        assert_eq!(w2.len(), 1);
        assert_eq!(w2[0].kind, CertificateKind::Lower { n: 8 });
        let rr10: Vec<_> = r.for_query(&Query::uniform(6, 9).unwrap());
        assert_eq!(rr10[0].kind, CertificateKind::Exact { value: 11 });
        let ag3: Vec<_> = r.for_query(&Query::uniform(4, 4).unwrap());
        assert_eq!(ag3[0].kind, CertificateKind::Exact { value: 10 });
        // round_robin(4) and affine_plane(2) certify the same fact; kept once.
        assert_eq!(r.for_query(&Query::uniform(3, 3).unwrap()).len(), 1);
    }

    #[test]
    fn json_forms() {
        let c = Certificate::lower("W1", Query::new(vec![5, 4, 3]).unwrap(), 7, "witness");
        let j = c.to_json();
        assert_eq!(j.lo, Some(8));
        assert_eq!(Certificate::from_json(&j, "x").unwrap(), c);
        let text = r#"{"query":[4,4,4,4], "exact":10, "source":"gen_factorable", "factorization":"ag3.json"}"#;
        let doc: CertificateJson = serde_json::from_str(text).unwrap();
        let c = Certificate::from_json(&doc, "cert_ag3").unwrap();
        assert_eq!(c.kind, CertificateKind::Exact { value: 10 });
        assert_eq!(c.id, "cert_ag3");
        assert_eq!(c.artifact.as_deref(), Some("ag3.json"));
        let bad: CertificateJson = serde_json::from_str(r#"{"query":[3,3],"lo":3,"hi":6,"source":"x"}"#).unwrap();
        assert!(Certificate::from_json(&bad, "x").is_err());
    }

    #[test]
    fn load_dir_reads_cert_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("cert_a.json"), r#"{"query":[4,4,4],"hi":10,"source":"search"}"#).unwrap();
        std::fs::write(dir.path().join("other.json"), "not json").unwrap();
        let mut r = CertificateRegistry::new();
        assert_eq!(r.load_dir(dir.path()).unwrap(), 1);
        assert_eq!(r.iter().next().unwrap().kind, CertificateKind::Upper { n: 10 });
        assert_eq!(r.load_dir(&dir.path().join("missing")).unwrap(), 0);
    }
}
