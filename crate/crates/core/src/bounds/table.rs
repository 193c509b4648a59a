//! Known two-color Ramsey numbers `R(a, b)`, consumed as inputs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Interval;
use crate::error::{Error, Result};

/// One table row. Either `exact` or `lo` (with optional `hi`) must be given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyEntryJson {
    pub a: u32,
    pub b: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<u32>,
    #[serde(default)]
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyEntry {
    pub interval: Interval,
    pub source: String,
}

/// Symmetric map `(a, b) -> R(a, b)`. `R(1, b) = 1` and `R(2, b) = b` are implied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamseyTable {
    entries: BTreeMap<(u32, u32), RamseyEntry>,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

impl Default for RamseyTable {
    fn default() -> Self {
        RamseyTable::builtin()
    }
}

impl RamseyTable {
    pub fn empty() -> Self {
        RamseyTable { entries: BTreeMap::new() }
    }

    /// `R(3,3) = 6`, `R(3,4) = 9`, `R(4,4) = 18`.
    pub fn builtin() -> Self {
        let mut t = RamseyTable::empty();
        for (a, b, v) in [(3, 3, 6), (3, 4, 9), (4, 4, 18)] {
            t.entries.insert(key(a, b), RamseyEntry { interval: Interval::exact(v), source: "built-in".into() });
        }
        t
    }

    /// Adds an entry; a different value for an existing key is an error.
    pub fn insert(&mut self, a: u32, b: u32, interval: Interval, source: impl Into<String>) -> Result<()> {
        let k = key(a, b);
        if let Some(old) = self.entries.get(&k) {
            if old.interval != interval {
                return Err(Error::parse(
                    format!("R({},{})", k.0, k.1),
                    format!("conflicting values {} ({}) and {}", old.interval, old.source, interval),
                ));
            }
            return Ok(());
        }
        self.entries.insert(k, RamseyEntry { interval, source: source.into() });
        Ok(())
    }

    /// `R(a, b)`, symmetric, with the trivial rows filled in.
    pub fn get(&self, a: u32, b: u32) -> Option<RamseyEntry> {
        let (a, b) = key(a, b);
        match a {
            0 => None,
            1 => Some(RamseyEntry { interval: Interval::exact(1), source: "R(1,b)=1".into() }),
            2 => Some(RamseyEntry { interval: Interval::exact(b), source: "R(2,b)=b".into() }),
            _ => self.entries.get(&(a, b)).cloned(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), &RamseyEntry)> {
        self.entries.iter().map(|(&k, e)| (k, e))
    }

    /// Merges a JSON array of entries into the table.
    pub fn merge_json(&mut self, text: &str, origin: &str) -> Result<()> {
        let rows: Vec<RamseyEntryJson> = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("{origin}:{}:{}", e.line(), e.column()), e.to_string())
        })?;
        for (i, row) in rows.iter().enumerate() {
            let at = format!("{origin}[{i}] (a={}, b={})", row.a, row.b);
            if row.a == 0 || row.b == 0 {
                return Err(Error::parse(at, "thresholds must be positive"));
            }
            let interval = match (row.exact, row.lo, row.hi) {
                (Some(v), None, None) => Interval::exact(v),
                (Some(v), lo, hi) if lo.unwrap_or(v) == v && hi.unwrap_or(v) == v => Interval::exact(v),
                (None, Some(lo), hi) => {
                    if hi.is_some_and(|h| h < lo) {
                        return Err(Error::parse(at, "hi is below lo"));
                    }
                    Interval { lo, hi }
                }
                _ => return Err(Error::parse(at, "need `exact`, or `lo` with optional `hi`")),
            };
            let source = if row.source.is_empty() { origin.to_string() } else { row.source.clone() };
            self.insert(row.a, row.b, interval, source).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(at.clone(), message),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Vec<RamseyEntryJson> {
        self.entries
            .iter()
            .map(|(&(a, b), e)| {
                let (exact, lo, hi) = if e.interval.is_exact() {
                    (Some(e.interval.lo), None, None)
                } else {
                    (None, Some(e.interval.lo), e.interval.hi)
                };
                RamseyEntryJson { a, b, exact, lo, hi, source: e.source.clone() }
            })
            .collect()
    }
}

/// Built-in defaults plus the entries of `path`; a missing file yields the defaults.
pub fn load_ramsey_table(path: &Path) -> Result<RamseyTable> {
    let mut t = RamseyTable::builtin();
    match std::fs::read_to_string(path) {
        Ok(text) => {
            t.merge_json(&text, &path.display().to_string())?;
            Ok(t)
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(t),
        Err(e) => Err(Error::io(path, e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_trivial_rows() {
        let t = RamseyTable::builtin();
        assert_eq!(t.get(3, 3).unwrap().interval, Interval::exact(6));
        assert_eq!(t.get(4, 3).unwrap().interval, Interval::exact(9));
        assert_eq!(t.get(4, 4).unwrap().interval, Interval::exact(18));
        assert_eq!(t.get(2, 9).unwrap().interval, Interval::exact(9));
        assert_eq!(t.get(7, 1).unwrap().interval, Interval::exact(1));
        assert!(t.get(5, 5).is_none());
    }

    #[test]
    fn missing_file_gives_defaults() {
        let t = load_ramsey_table(Path::new("/nonexistent/ramsey.json")).unwrap();
        assert_eq!(t, RamseyTable::builtin());
    }

    #[test]
    fn user_entries_are_symmetric() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.json");
        std::fs::write(&p, r#"[{"a":3,"b":5,"exact":14,"source":"user"},{"a":3,"b":6,"lo":18,"hi":18}]"#).unwrap();
        let t = load_ramsey_table(&p).unwrap();
        let e = t.get(5, 3).unwrap();
        assert_eq!(e.interval, Interval::exact(14));
        assert_eq!(e.source, "user");
        assert_eq!(t.get(6, 3).unwrap().interval, Interval::exact(18));
    }

    #[test]
    fn conflicts_are_parse_errors() {
        let mut t = RamseyTable::builtin();
        let err = t.merge_json(r#"[{"a":3,"b":5,"exact":14},{"a":5,"b":3,"exact":15}]"#, "t.json").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.contains("t.json[1]"), "{location}"),
            e => panic!("unexpected {e:?}"),
        }
        assert!(RamseyTable::builtin().merge_json(r#"[{"a":3,"b":3,"exact":7}]"#, "x").is_err());
        // Repeating the same value is fine.
        assert!(RamseyTable::builtin().merge_json(r#"[{"a":3,"b":3,"exact":6}]"#, "x").is_ok());
        let err = RamseyTable::builtin().merge_json("[{\"a\":3,\n \"b\":}]", "bad.json").unwrap_err();
        assert!(matches!(err, Error::Parse { ref location, .. } if location.starts_with("bad.json:2:")));
        assert!(RamseyTable::builtin().merge_json(r#"[{"a":3,"b":7}]"#, "x").is_err());
    }
}
