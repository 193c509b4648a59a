//! Exact values by running the good-coloring search upward from the engine's lower bound.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{search_with, Exists, SearchConfig, SearchStats};
use crate::bounds::{Bound, Certificate, CertificateRegistry, Engine, Query};
use crate::colorings::{ColoringJson, EdgeColoring};
use crate::error::{Error, Result};

/// Directory of good colorings (`good_n{n}_m{m1-m2-...}.json`) and search
/// certificates (`cert_*.json`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessCache {
    dir: PathBuf,
}

impl WitnessCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        WitnessCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn tag(q: &Query) -> String {
        q.thresholds().iter().map(u32::to_string).collect::<Vec<_>>().join("-")
    }

    pub fn witness_path(&self, n: usize, q: &Query) -> PathBuf {
        self.dir.join(format!("good_n{n}_m{}.json", Self::tag(q)))
    }

    /// A cached good coloring, re-verified. A file that fails verification is an error.
    pub fn load(&self, n: usize, q: &Query) -> Result<Option<EdgeColoring>> {
        let path = self.witness_path(n, q);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&path, e)),
        };
        let doc: ColoringJson = serde_json::from_str(&text)
            .map_err(|e| Error::parse(format!("{}:{}:{}", path.display(), e.line(), e.column()), e.to_string()))?;
        let f = EdgeColoring::from_json(&doc)?;
        let good = f.n() == n
            && f.k() == q.k()
            && f.alpha_vector().iter().zip(q.thresholds()).all(|(&a, &m)| (a as u32) < m);
        if !good {
            return Err(Error::InvalidColoring(format!("{} is not a good coloring for n={n} {q}", path.display())));
        }
        Ok(Some(f))
    }

    pub fn store(&self, q: &Query, f: &EdgeColoring) -> Result<PathBuf> {
        let path = self.witness_path(f.n(), q);
        self.write(&path, &serde_json::to_string_pretty(&f.to_json()).expect("serializable"))?;
        Ok(path)
    }

    /// Records `R̄(q) <= n` as a certificate file.
    pub fn store_upper(&self, q: &Query, n: u32) -> Result<PathBuf> {
        let path = self.dir.join(format!("cert_search_m{}_n{n}.json", Self::tag(q)));
        let c = Certificate::upper(format!("search n={n} {q}"), q.clone(), n, "search");
        self.write(&path, &serde_json::to_string_pretty(&c.to_json()).expect("serializable"))?;
        Ok(path)
    }

    fn write(&self, path: &Path, text: &str) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Every `cert_*.json` in the directory.
    pub fn certificates(&self) -> Result<CertificateRegistry> {
        let mut r = CertificateRegistry::new();
        r.load_dir(&self.dir)?;
        Ok(r)
    }

    /// Lower and upper certificates implied by the cached files for `q`.
    fn certificates_for(&self, q: &Query, upto: u32) -> Result<Vec<Certificate>> {
        let mut out: Vec<Certificate> = self.certificates()?.iter().filter(|c| &c.query == q).cloned().collect();
        for n in (1..=upto).rev() {
            if let Some(f) = self.load(n as usize, q)? {
                let path = self.witness_path(n as usize, q);
                let c = Certificate::lower(format!("cached good_n{n}"), q.clone(), f.n() as u32, "witness cache");
                out.push(c.with_artifact(path.display().to_string()));
                break;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ExactOutcome {
    Exact { value: u32 },
    Bound { lo: u32, hi: Option<u32> },
}

/// One order tried by [`exact_value`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRun {
    pub n: usize,
    pub exists: Exists,
    pub nodes: u64,
    pub from_cache: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactReport {
    pub query: Query,
    pub outcome: ExactOutcome,
    /// The engine's bound before any search.
    pub engine: Bound,
    pub runs: Vec<SearchRun>,
    pub stats: SearchStats,
}

impl ExactReport {
    pub fn value(&self) -> Option<u32> {
        match self.outcome {
            ExactOutcome::Exact { value } => Some(value),
            ExactOutcome::Bound { .. } => None,
        }
    }

    /// Number of searches actually run (cache hits excluded).
    pub fn search_calls(&self) -> usize {
        self.runs.iter().filter(|r| !r.from_cache).count()
    }
}

/// `R̄(q)` with the built-in engine and default search settings.
pub fn exact_value(q: &Query, budget: Option<Duration>, cache: Option<&WitnessCache>) -> Result<ExactReport> {
    exact_value_with(q, budget, &SearchConfig::default(), &mut Engine::builtin(), cache)
}

/// Narrows the engine interval by searching `n = lo, lo + 1, ...`; the first order
/// with no good coloring is the value. Results are registered in `engine` and,
/// when given, written to `cache`.
pub fn exact_value_with(
    q: &Query,
    budget: Option<Duration>,
    cfg: &SearchConfig,
    engine: &mut Engine,
    cache: Option<&WitnessCache>,
) -> Result<ExactReport> {
    let start = Instant::now();
    let deadline = budget.map(|b| start + b);
    let first = engine.bound(q);
    if let Some(cache) = cache {
        let upto = first.hi.unwrap_or(crate::graphs::MAX_VERTICES as u32);
        for c in cache.certificates_for(q, upto)? {
            engine.certificates.add(c);
        }
    }
    let b = if cache.is_some() { engine.bound(q) } else { first.clone() };
    let (mut lo, hi) = (b.lo, b.hi);
    let mut runs = Vec::new();
    let mut stats = SearchStats::default();
    let outcome = loop {
        if hi == Some(lo) {
            break ExactOutcome::Exact { value: lo };
        }
        if deadline.is_some_and(|d| Instant::now() >= d) || lo as usize > crate::graphs::MAX_VERTICES {
            break ExactOutcome::Bound { lo, hi };
        }
        let n = lo as usize;
        if let Some(f) = cache.map(|c| c.load(n, q)).transpose()?.flatten() {
            runs.push(SearchRun { n, exists: Exists::Yes, nodes: 0, from_cache: true });
            engine.certificates.add(Certificate::lower(format!("cached good_n{n}"), q.clone(), f.n() as u32, "witness cache"));
            lo += 1;
            continue;
        }
        let out = search_with(n, q, deadline, cfg, engine)?;
        stats.absorb(&out.stats);
        runs.push(SearchRun { n, exists: out.exists, nodes: out.stats.nodes, from_cache: false });
        match out.exists {
            Exists::Yes => {
                let f = out.witness.expect("yes carries a witness");
                let mut c = Certificate::lower(format!("search n={n} {q}"), q.clone(), n as u32, "search");
                if let Some(cache) = cache {
                    c = c.with_artifact(cache.store(q, &f)?.display().to_string());
                }
                engine.certificates.add(c);
                lo += 1;
            }
            Exists::No => {
                if let Some(cache) = cache {
                    cache.store_upper(q, n as u32)?;
                }
                engine.certificates.add(Certificate::upper(format!("search n={n} {q}"), q.clone(), n as u32, "search"));
                break ExactOutcome::Exact { value: n as u32 };
            }
            Exists::Undecided => break ExactOutcome::Bound { lo, hi },
        }
    };
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(ExactReport { query: q.clone(), outcome, engine: first, runs, stats })
}
