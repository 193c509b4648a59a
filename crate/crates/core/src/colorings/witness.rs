//! Explicit colorings certifying strict lower bounds, and their verification.

use serde::{Deserialize, Serialize};

use super::{ColoringJson, EdgeColoring};
use crate::bounds::Query;
use crate::error::{Error, Result};

/// A coloring together with the alpha vector it is claimed to have.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub id: String,
    pub coloring: EdgeColoring,
    pub expected_alpha: Vec<usize>,
}

impl Witness {
    /// Builds a witness, checking the claimed alpha vector.
    pub fn new(id: impl Into<String>, coloring: EdgeColoring, expected_alpha: Vec<usize>) -> Result<Self> {
        let id = id.into();
        if expected_alpha.len() != coloring.k() {
            return Err(Error::InvalidColoring(format!(
                "witness {id}: {} expected alphas for {} colors",
                expected_alpha.len(),
                coloring.k()
            )));
        }
        let actual = coloring.alpha_vector();
        if actual != expected_alpha {
            return Err(Error::InvalidColoring(format!(
                "witness {id}: expected alpha {expected_alpha:?}, found {actual:?}"
            )));
        }
        Ok(Witness { id, coloring, expected_alpha })
    }

    /// The smallest query this witness separates: `(alpha_1 + 1, ..., alpha_k + 1)`.
    pub fn claim(&self) -> Query {
        Query::new(self.expected_alpha.iter().map(|&a| a as u32 + 1).collect()).expect("alphas are finite")
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson { id: self.id.clone(), expected_alpha: self.expected_alpha.clone(), coloring: self.coloring.to_json() }
    }

    /// Parses without checking `expected_alpha`; use [`verify_witness`] for that.
    pub fn from_json(doc: &WitnessJson) -> Result<Self> {
        let coloring = EdgeColoring::from_json(&doc.coloring)?;
        if doc.expected_alpha.len() != coloring.k() {
            return Err(Error::parse(
                "expected_alpha",
                format!("{} entries for {} colors", doc.expected_alpha.len(), coloring.k()),
            ));
        }
        Ok(Witness { id: doc.id.clone(), coloring, expected_alpha: doc.expected_alpha.clone() })
    }
}

/// Coloring JSON with `id` and `expected_alpha` added.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub id: String,
    pub expected_alpha: Vec<usize>,
    #[serde(flatten)]
    pub coloring: ColoringJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub id: String,
    pub n: usize,
    pub alpha: Vec<usize>,
    pub expected_alpha: Vec<usize>,
    pub ok: bool,
    /// `R̄(q) > n` holds for this query and every query dominating it.
    pub certifies: Query,
}

impl WitnessReport {
    /// Whether the verified coloring separates `q`, i.e. `R̄(q) > n`.
    pub fn separates(&self, q: &Query) -> bool {
        self.ok && self.certifies.dominated_by(q)
    }
}

/// Recomputes the alpha vector; mismatches are reported, not raised.
pub fn verify_witness(w: &Witness) -> WitnessReport {
    let alpha = w.coloring.alpha_vector();
    let certifies =
        Query::new(alpha.iter().map(|&a| a as u32 + 1).collect()).expect("alpha vector is nonempty");
    WitnessReport {
        id: w.id.clone(),
        n: w.coloring.n(),
        ok: alpha == w.expected_alpha,
        alpha,
        expected_alpha: w.expected_alpha.clone(),
        certifies,
    }
}

fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n).map(|v| (v, v % n + 1)).collect()
}

/// Fills the last class with every pair not listed in the others.
fn with_rest(n: usize, mut classes: Vec<Vec<(usize, usize)>>) -> Vec<Vec<(usize, usize)>> {
    let used: std::collections::HashSet<(usize, usize)> =
        classes.iter().flatten().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let rest = (1..=n).flat_map(|v| (1..v).map(move |u| (u, v))).filter(|p| !used.contains(p)).collect();
    classes.push(rest);
    classes
}

/// Reduces into the representatives `1..=7`.
fn mod7(x: usize) -> usize {
    (x - 1) % 7 + 1
}

fn build(id: &str) -> Result<Witness> {
    let (coloring, alpha) = match id {
        // alpha = (4,3,2): a matching, a 7-cycle, and the rest.
        "W1" => {
            let classes = with_rest(7, vec![vec![(2, 5), (3, 6), (4, 7)], cycle_edges(7)]);
            (EdgeColoring::from_classes(7, &classes)?, vec![4, 3, 2])
        }
        // alpha = (6,3,2): two chords, an 8-cycle plus two chords, and the rest.
        "W2" => {
            let mut c2 = cycle_edges(8);
            c2.extend([(3, 7), (4, 8)]);
            let classes = with_rest(8, vec![vec![(1, 5), (2, 6)], c2]);
            (EdgeColoring::from_classes(8, &classes)?, vec![6, 3, 2])
        }
        // Ten colors on K7, every alpha equal to 5.
        "W3" => {
            let mut classes: Vec<Vec<(usize, usize)>> = (1..=7)
                .map(|i| vec![(mod7(i + 2), mod7(i + 5)), (mod7(i + 3), mod7(i + 4))])
                .collect();
            classes.push(vec![(1, 3), (2, 4)]);
            classes.push(vec![(3, 5), (4, 6)]);
            classes.push(vec![(5, 7), (6, 1), (2, 7)]);
            (EdgeColoring::from_classes(7, &classes)?, vec![5; 10])
        }
        // K6 as the two alternating matchings of the hexagon 1..6 plus its complement.
        "W4" => {
            let classes = with_rest(6, vec![vec![(1, 2), (3, 4), (5, 6)], vec![(2, 3), (4, 5), (6, 1)]]);
            (EdgeColoring::from_classes(6, &classes)?, vec![3, 3, 2])
        }
        _ => return Err(Error::BadArgs(format!("unknown built-in witness {id}"))),
    };
    Witness::new(id, coloring, alpha)
}

pub const BUILTIN_WITNESS_IDS: [&str; 4] = ["W1", "W2", "W3", "W4"];

pub fn builtin_witness(id: &str) -> Option<Witness> {
    build(id).ok()
}

/// The built-in witness colorings, each checked on construction.
pub fn witness_library() -> Vec<Witness> {
    BUILTIN_WITNESS_IDS.iter().map(|id| build(id).expect("built-in witnesses are valid")).collect()
}
